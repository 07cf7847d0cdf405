#include "horohyp/graph_core.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace horohyp {

const char* err_name(Err e) {
  switch (e) {
    case Err::Ok: return "Ok";
    case Err::Parse: return "ParseError";
    case Err::NotCayley: return "NotCayley";
    case Err::NotHyperbolic: return "NotHyperbolic";
    case Err::DegreeBoundViolated: return "DegreeBoundViolated";
    case Err::OracleAsymmetry: return "OracleAsymmetry";
    case Err::Uncertified: return "Uncertified";
    case Err::NotAPath: return "NotAPath";
    case Err::NotGeodesic: return "NotGeodesic";
    case Err::HorizonTooSmall: return "HorizonTooSmall";
    case Err::Unstable: return "Unstable";
    case Err::TooManyClasses: return "TooManyClasses";
    case Err::NoConvergentRay: return "NoConvergentRay";
    case Err::OutsideObservationSet: return "OutsideObservationSet";
    case Err::NotFoundWithinWindow: return "NotFoundWithinWindow";
    case Err::NoCandidate: return "NoCandidate";
    case Err::NoExactOracle: return "NoExactOracle";
    case Err::NotEnumerable: return "NotEnumerable";
    case Err::CalibrationFailed: return "CalibrationFailed";
    case Err::UnsupportedFormat: return "UnsupportedFormat";
    case Err::ResourceLimit: return "ResourceLimit";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Cayley

void CayleyStructure::set_order(const std::vector<std::string>& labels) {
  require(static_cast<int>(labels.size()) == num_gens(), Err::Parse,
          "order on S must list every generator exactly once");
  std::vector<int> rank(labels.size(), -1);
  for (std::size_t pos = 0; pos < labels.size(); ++pos) {
    int g = gen_by_label(labels[pos]);
    require(rank[g] < 0, Err::Parse, "duplicate generator in order on S: " + labels[pos]);
    rank[g] = static_cast<int>(pos);
  }
  order_rank_ = rank;
}

int CayleyStructure::gen_by_label(const std::string& label) const {
  for (int i = 0; i < num_gens(); ++i)
    if (gen_label(i) == label) return i;
  fail(Err::Parse, "unknown generator label: " + label);
}

Cmp CayleyStructure::cmp_lex(const std::vector<int>& a, const std::vector<int>& b) const {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    int ra = order_rank(a[i]), rb = order_rank(b[i]);
    if (ra != rb) return ra < rb ? Cmp::LT : Cmp::GT;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? Cmp::LT : Cmp::GT;
  return Cmp::EQ;
}

Cmp CayleyStructure::cmp_shortlex(VertexId u, VertexId v) const {
  std::vector<int> wu = word(u), wv = word(v);
  if (wu.size() != wv.size()) return wu.size() < wv.size() ? Cmp::LT : Cmp::GT;
  return cmp_lex(wu, wv);
}

// ---------------------------------------------------------------- oracle helpers

std::vector<VertexId> AdjacencyOracle::sorted_unique(std::vector<VertexId> v) const {
  std::sort(v.begin(), v.end(), [this](VertexId a, VertexId b) { return less(a, b); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::string> AdjacencyOracle::names(const std::vector<VertexId>& v) const {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (VertexId x : v) out.push_back(name(x));
  return out;
}

int AdjacencyOracle::gen_step(VertexId u, VertexId v) const {
  const CayleyStructure* c = cayley();
  require(c != nullptr, Err::NotCayley, family_name() + " carries no generator labels");
  VertexId step = c->mul(c->inv(u), v);
  for (int i = 0; i < c->num_gens(); ++i)
    if (c->apply(c->identity(), i) == step) return i;
  fail(Err::NotAPath, name(u) + " -> " + name(v) + " is not a generator step");
}

std::string PathType::str(const AdjacencyOracle& o) const {
  const CayleyStructure* c = o.cayley();
  require(c != nullptr, Err::NotCayley, "path types need generator labels");
  std::string out;
  for (int g : gens) out += c->gen_label(g);
  return out;
}

std::vector<std::string> PathType::labels(const AdjacencyOracle& o) const {
  const CayleyStructure* c = o.cayley();
  require(c != nullptr, Err::NotCayley, "path types need generator labels");
  std::vector<std::string> out;
  for (int g : gens) out.push_back(c->gen_label(g));
  return out;
}

PathType path_type(const AdjacencyOracle& o, const std::vector<VertexId>& path) {
  require(!path.empty(), Err::NotAPath, "empty vertex sequence");
  PathType t;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) t.gens.push_back(o.gen_step(path[i], path[i + 1]));
  return t;
}

Cmp shortlex_cmp(const AdjacencyOracle& o, VertexId u, VertexId v) {
  const CayleyStructure* c = o.cayley();
  require(c != nullptr, Err::NotCayley, o.family_name() + " carries no generator labels");
  return c->cmp_shortlex(u, v);
}

// ---------------------------------------------------------------- Window

Window::Window(OraclePtr oracle, VertexId center, int radius, std::size_t max_vertices)
    : oracle_(std::move(oracle)), center_(center), radius_(radius) {
  require(radius >= 0, Err::Parse, "window radius must be >= 0");
  const AdjacencyOracle& o = *oracle_;
  std::unordered_map<VertexId, int> idx;
  std::vector<VertexId> order;  // BFS discovery order
  std::vector<int> dist;
  order.push_back(center);
  idx.emplace(center, 0);
  dist.push_back(0);
  std::vector<std::vector<VertexId>> nbrs;
  nbrs.emplace_back();
  for (std::size_t head = 0; head < order.size(); ++head) {
    VertexId v = order[head];
    if (dist[head] == radius) continue;
    std::vector<VertexId> ns = o.neighbors(v);
    require(static_cast<int>(ns.size()) <= o.degree_bound(), Err::DegreeBoundViolated,
            o.name(v) + " has " + std::to_string(ns.size()) + " neighbors, bound is " +
                std::to_string(o.degree_bound()));
    nbrs[head] = ns;
    for (VertexId w : ns) {
      require(w != v, Err::OracleAsymmetry, "self-loop at " + o.name(v));
      if (idx.emplace(w, static_cast<int>(order.size())).second) {
        require(order.size() < max_vertices, Err::ResourceLimit,
                "window exceeds " + std::to_string(max_vertices) + " vertices");
        order.push_back(w);
        dist.push_back(dist[head] + 1);
        nbrs.emplace_back();
      }
    }
  }
  // canonical vertex order
  verts_ = o.sorted_unique(order);
  for (std::size_t i = 0; i < verts_.size(); ++i) idx_.emplace(verts_[i], static_cast<int>(i));
  adj_.assign(verts_.size(), {});
  dc_.assign(verts_.size(), 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    int me = idx_.at(order[head]);
    dc_[me] = dist[head];
    for (VertexId w : nbrs[head]) {
      auto it = idx_.find(w);
      if (it != idx_.end()) adj_[me].push_back(it->second);
    }
  }
  // frontier vertices were never expanded; fill their in-window adjacency
  for (std::size_t head = 0; head < order.size(); ++head) {
    if (dist[head] < radius) continue;
    int me = idx_.at(order[head]);
    for (VertexId w : o.neighbors(order[head])) {
      require(w != order[head], Err::OracleAsymmetry, "self-loop at " + o.name(order[head]));
      auto it = idx_.find(w);
      if (it != idx_.end()) adj_[me].push_back(it->second);
    }
  }
  for (auto& a : adj_) {
    std::sort(a.begin(), a.end());
    require(std::adjacent_find(a.begin(), a.end()) == a.end(), Err::OracleAsymmetry,
            "duplicate edge reported by oracle");
  }
  // symmetry audit on the explored region
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    for (int v : adj_[u]) {
      if (!std::binary_search(adj_[v].begin(), adj_[v].end(), static_cast<int>(u)))
        fail(Err::OracleAsymmetry,
             oracle_->name(verts_[u]) + " ~ " + oracle_->name(verts_[v]) + " is one-sided");
      if (static_cast<int>(u) < v) edges_.emplace_back(static_cast<int>(u), v);
    }
  }

  if (oracle_->exact_dist(center_, center_)) {
    certified_radius_ = radius_;
  } else {
    // provable floor: any pair inside B(c, r/3) routes through the center
    certified_radius_ = radius_ / 3;
    // verify a larger radius exhaustively while it stays cheap
    std::vector<std::vector<int>> by_dc(radius_ + 1);
    for (std::size_t i = 0; i < verts_.size(); ++i) by_dc[dc_[i]].push_back(static_cast<int>(i));
    std::vector<int> members;
    for (int r = 0; r <= radius_; ++r) {
      members.insert(members.end(), by_dc[r].begin(), by_dc[r].end());
      if (members.size() * members.size() > 4000000) break;
      bool ok = true;
      for (std::size_t i = 0; i < members.size() && ok; ++i) {
        const std::vector<int>& d = bfs_from(members[i]);
        for (std::size_t j = 0; j < members.size() && ok; ++j)
          if (!certified_local(members[i], members[j], d[members[j]])) ok = false;
      }
      if (!ok) break;
      certified_radius_ = std::max(certified_radius_, r);
    }
  }
}

Window build_window(OraclePtr oracle, VertexId center, int radius) {
  return Window(std::move(oracle), center, radius);
}

int Window::local(VertexId v) const {
  auto it = idx_.find(v);
  require(it != idx_.end(), Err::Uncertified,
          oracle_->name(v) + " is outside window around " + oracle_->name(center_));
  return it->second;
}

int Window::dist_from_center(VertexId v) const { return dc_[local(v)]; }

const std::vector<int>& Window::bfs_from(int src) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = bfs_memo_.find(src);
  if (it != bfs_memo_.end()) return it->second;
  std::vector<int> d(verts_.size(), -1);
  std::deque<int> q{src};
  d[src] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj_[v])
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
  }
  return bfs_memo_.emplace(src, std::move(d)).first->second;
}

long Window::dist_bfs_local(int u, int v) const {
  int d = bfs_from(u)[v];
  require(d >= 0, Err::Uncertified, "window is disconnected between the endpoints");
  return d;
}

bool Window::certified_local(int u, int v, long dw) const {
  return std::min(dc_[u], dc_[v]) + dw <= radius_;
}

bool Window::certified(VertexId u, VertexId v) const {
  if (!contains(u) || !contains(v)) return false;
  if (oracle_->exact_dist(u, v)) return true;
  int lu = local(u), lv = local(v);
  int d = bfs_from(lu)[lv];
  return d >= 0 && certified_local(lu, lv, d);
}

long Window::dist(VertexId u, VertexId v) const {
  if (auto d = oracle_->exact_dist(u, v)) {
    local(u);
    local(v);
    return *d;
  }
  return dist_bfs(u, v);
}

long Window::dist_bfs(VertexId u, VertexId v) const {
  int lu = local(u), lv = local(v);
  long d = dist_bfs_local(lu, lv);
  require(certified_local(lu, lv, d), Err::Uncertified,
          "pair " + oracle_->name(u) + "," + oracle_->name(v) +
              " not certified in this window; widen the window");
  return d;
}

std::vector<VertexId> Window::interval(VertexId u, VertexId v) const {
  long duv = dist(u, v);
  std::vector<VertexId> out;
  if (oracle_->exact_dist(u, v)) {
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      VertexId z = verts_[i];
      if (*oracle_->exact_dist(u, z) + *oracle_->exact_dist(z, v) == duv) out.push_back(z);
    }
    return out;  // verts_ already canonical
  }
  int lu = local(u), lv = local(v);
  const std::vector<int>& du = bfs_from(lu);
  const std::vector<int>& dv = bfs_from(lv);
  for (std::size_t i = 0; i < verts_.size(); ++i)
    if (du[i] >= 0 && dv[i] >= 0 && du[i] + dv[i] == duv) out.push_back(verts_[i]);
  return out;
}

bool Window::is_geodesic(const std::vector<VertexId>& path) const {
  require(!path.empty(), Err::NotAPath, "empty vertex sequence");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int a = local(path[i]), b = local(path[i + 1]);
    require(a != b, Err::NotAPath, "repeated vertex " + oracle_->name(path[i]));
    require(std::binary_search(adj_[a].begin(), adj_[a].end(), b), Err::NotAPath,
            oracle_->name(path[i]) + " and " + oracle_->name(path[i + 1]) + " are not adjacent");
  }
  return static_cast<long>(path.size()) - 1 == dist(path.front(), path.back());
}

namespace {

// max over geodesics a->b (inside the interval DAG) of min over path
// vertices of dist(p, .)
int maxmin_over_geodesics(const std::vector<int>& da, const std::vector<int>& db,
                          const std::vector<int>& dp, int a, int b,
                          const std::vector<std::vector<int>>& adj,
                          const std::vector<std::vector<int>>& by_level,
                          std::vector<int>& scratch) {
  int dab = da[b];
  scratch[a] = dp[a];
  for (int lvl = 1; lvl <= dab; ++lvl) {
    for (int v : by_level[lvl]) {
      int best = -1;
      for (int w : adj[v])
        if (da[w] == lvl - 1 && db[w] == dab - lvl + 1 && scratch[w] > best) best = scratch[w];
      scratch[v] = best < 0 ? -1 : std::min(best, dp[v]);
    }
  }
  return scratch[b];
}

}  // namespace

int Window::estimate_delta() const {
  require(!verts_.empty(), Err::Uncertified, "empty window");
  const int n = static_cast<int>(verts_.size());
  require(n <= 150, Err::ResourceLimit,
          "estimate_delta is exhaustive; window has " + std::to_string(n) + " vertices (max 150)");
  for (int i = 0; i < n; ++i) bfs_from(i);
  auto D = [this](int a, int b) -> int { return bfs_from(a)[b]; };

  // W[pair(a,b)][p] = adversarial distance from p to a geodesic side a-b
  std::vector<std::vector<int>> W(static_cast<std::size_t>(n) * n);
  std::vector<int> scratch(n);
  std::vector<std::vector<int>> by_level;
  for (int a = 0; a < n; ++a) {
    const std::vector<int>& da = bfs_from(a);
    for (int b = a; b < n; ++b) {
      const std::vector<int>& db = bfs_from(b);
      int dab = da[b];
      if (dab < 0) fail(Err::Uncertified, "window is disconnected");
      by_level.assign(dab + 1, {});
      for (int v = 0; v < n; ++v)
        if (da[v] >= 0 && db[v] >= 0 && da[v] + db[v] == dab) by_level[da[v]].push_back(v);
      std::vector<int> row(n);
      for (int p = 0; p < n; ++p)
        row[p] = maxmin_over_geodesics(da, db, bfs_from(p), a, b, adj_, by_level, scratch);
      W[static_cast<std::size_t>(a) * n + b] = row;
      W[static_cast<std::size_t>(b) * n + a] = std::move(row);
    }
  }
  auto w = [&](int a, int b, int p) { return W[static_cast<std::size_t>(a) * n + b][p]; };

  int delta = 0;
  for (int x = 0; x < n; ++x) {
    const std::vector<int>& dx = bfs_from(x);
    for (int y = x + 1; y < n; ++y) {
      const std::vector<int>& dy = bfs_from(y);
      int dxy = dx[y];
      for (int p = 0; p < n; ++p) {
        if (dx[p] + dy[p] != dxy) continue;  // p must lie on a side x-y
        for (int z = 0; z < n; ++z) {
          int v = std::min(w(x, z, p), w(z, y, p));
          if (v > delta) delta = v;
        }
      }
    }
  }
  return delta;
}

std::string Window::to_json() const {
  nlohmann::ordered_json j;
  j["center"] = oracle_->name(center_);
  j["radius"] = radius_;
  j["certified_radius"] = certified_radius_;
  j["vertices"] = oracle_->names(verts_);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  std::vector<std::pair<std::string, std::string>> named;
  for (auto [a, b] : edges_) named.emplace_back(oracle_->name(verts_[a]), oracle_->name(verts_[b]));
  std::sort(named.begin(), named.end());
  for (auto& [a, b] : named) edges.push_back({a, b});
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

std::string Window::to_dot() const {
  std::ostringstream os;
  os << "graph window {\n";
  for (std::size_t i = 0; i < verts_.size(); ++i)
    os << "  \"" << oracle_->name(verts_[i]) << "\" [label=\"" << oracle_->name(verts_[i]) << "\\nd="
       << dc_[i] << "\"];\n";
  std::vector<std::pair<std::string, std::string>> named;
  for (auto [a, b] : edges_) named.emplace_back(oracle_->name(verts_[a]), oracle_->name(verts_[b]));
  std::sort(named.begin(), named.end());
  for (auto& [a, b] : named) os << "  \"" << a << "\" -- \"" << b << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace horohyp
