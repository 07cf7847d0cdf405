#include "horohyp/engine.hpp"

#include <algorithm>
#include <deque>

namespace horohyp {

const char* cert_name(Cert c) {
  switch (c) {
    case Cert::Exact: return "exact";
    case Cert::StableObserved: return "stable_observed";
    case Cert::Truncated: return "truncated";
  }
  return "?";
}

Cert weaker(Cert a, Cert b) { return static_cast<Cert>(std::max(static_cast<int>(a), static_cast<int>(b))); }

long HoroTrace::value_at(VertexId v) const {
  for (std::size_t i = 0; i < obs.size(); ++i)
    if (obs[i] == v) return values[i];
  fail(Err::OutsideObservationSet, "vertex not in the observation set of this trace");
}

Engine::Engine(Family fam, RefRay ray, Horizon h, EngineConfig cfg)
    : fam_(std::move(fam)), ray_(std::move(ray)), h_(h), cfg_(cfg) {
  if (h_.S < 0) {
    try {
      h_.S = 2 * delta_hat() + 2;
    } catch (const Error&) {
      h_.S = 4;  // delta-free default; delta-dependent operations will refuse anyway
    }
  }
  h_.validate();
}

int Engine::delta_hat() {
  if (delta_) return *delta_;
  if (cfg_.delta_override >= 0) return *(delta_ = cfg_.delta_override);
  if (auto d = fam_.delta_bound()) return *(delta_ = *d);
  if (fam_.spec.kind == FamilyKind::Custom) {
    // no family constant: certify a working bound on a small window
    Window w(fam_.oracle, fam_.o().base_point(), std::min(h_.R, 6));
    return *(delta_ = w.estimate_delta());
  }
  fail(Err::NotHyperbolic,
       fam_.spec.kind_name() + " carries no slimness bound; delta-dependent operations refuse it");
}

bool Engine::hyperbolic_ok() {
  try {
    delta_hat();
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------- metric

void Engine::grow_window(VertexId must_contain, int need_radius) {
  win_radius_ = std::max(win_radius_, need_radius);
  for (int iter = 0; iter < 16; ++iter) {
    win_.emplace(fam_.oracle, fam_.o().base_point(), win_radius_, cfg_.ball_cap);
    if (win_->contains(must_contain)) return;
    win_radius_ = win_radius_ * 3 / 2 + 8;
  }
  fail(Err::ResourceLimit, "vertex " + fam_.o().name(must_contain) + " unreachable within window limits");
}

long Engine::dist_window(VertexId u, VertexId v) {
  if (!win_) grow_window(u, h_.H + h_.S + 32);
  for (int iter = 0; iter < 16; ++iter) {
    if (!win_->contains(u)) {
      grow_window(u, win_radius_ * 3 / 2 + 8);
      continue;
    }
    if (!win_->contains(v)) {
      grow_window(v, win_radius_ * 3 / 2 + 8);
      continue;
    }
    try {
      return win_->dist(u, v);
    } catch (const Error& e) {
      if (e.code() != Err::Uncertified) throw;
      win_radius_ = win_radius_ * 3 / 2 + 8;
      win_.emplace(fam_.oracle, fam_.o().base_point(), win_radius_, cfg_.ball_cap);
    }
  }
  fail(Err::ResourceLimit, "distance not certifiable within window limits");
}

long Engine::dist(VertexId u, VertexId v) {
  if (auto d = fam_.o().exact_dist(u, v)) return *d;
  return dist_window(u, v);
}

std::vector<VertexId> Engine::ball(VertexId x, int r) {
  std::vector<VertexId> order{x};
  std::unordered_map<VertexId, int> depth{{x, 0}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    VertexId v = order[head];
    if (depth[v] == r) continue;
    for (VertexId w : fam_.o().neighbors(v))
      if (depth.emplace(w, depth[v] + 1).second) {
        require(order.size() < cfg_.ball_cap, Err::ResourceLimit, "ball enumeration too large");
        order.push_back(w);
      }
  }
  return sorted(std::move(order));
}

std::vector<VertexId> Engine::interval(VertexId x, VertexId w) {
  long d = dist(x, w);
  std::vector<VertexId> out{x};
  std::vector<VertexId> frontier{x};
  for (long l = 1; l <= d; ++l) {
    std::unordered_set<VertexId> seen;
    std::vector<VertexId> next;
    for (VertexId v : frontier)
      for (VertexId u : fam_.o().neighbors(v)) {
        if (!seen.insert(u).second) continue;
        if (dist(u, w) == d - l && dist(x, u) == l) next.push_back(u);
      }
    frontier = std::move(next);
    out.insert(out.end(), frontier.begin(), frontier.end());
  }
  return sorted(std::move(out));
}

std::vector<VertexId> Engine::canonical_geodesic(VertexId x, VertexId w) {
  std::vector<VertexId> path{x};
  VertexId v = x;
  long k = dist(x, w);
  while (k > 0) {
    VertexId best = v;
    bool found = false;
    for (VertexId u : fam_.o().neighbors(v)) {
      if (dist(u, w) != k - 1) continue;
      if (!found || fam_.o().less(u, best)) {
        best = u;
        found = true;
      }
    }
    require(found, Err::Internal, "geodesic step missing");
    path.push_back(best);
    v = best;
    --k;
  }
  return path;
}

void Engine::all_geodesics(VertexId x, VertexId w, std::vector<std::vector<VertexId>>& out) {
  std::vector<VertexId> cur{x};
  long d = dist(x, w);
  std::size_t budget = cfg_.path_cap;
  // iterative DFS over distance-decreasing steps
  struct Frame {
    std::vector<VertexId> options;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  auto options_at = [&](VertexId v, long remaining) {
    std::vector<VertexId> opts;
    for (VertexId u : fam_.o().neighbors(v))
      if (dist(u, w) == remaining - 1) opts.push_back(u);
    return sorted(std::move(opts));
  };
  if (d == 0) {
    out.push_back(cur);
    return;
  }
  stack.push_back({options_at(x, d), 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.options.size()) {
      stack.pop_back();
      cur.pop_back();
      continue;
    }
    VertexId u = f.options[f.next++];
    cur.push_back(u);
    long remaining = d - static_cast<long>(cur.size() - 1);
    if (remaining == 0) {
      out.push_back(cur);
      require(--budget > 0, Err::ResourceLimit, "geodesic enumeration exceeded path cap");
      cur.pop_back();
    } else {
      stack.push_back({options_at(u, remaining), 0});
    }
  }
}

// ---------------------------------------------------------------- reference ray

VertexId Engine::refv(int n) {
  require(n >= 0, Err::Parse, "ray index must be >= 0");
  require(n <= ray_.max_index(), Err::HorizonTooSmall,
          "explicit ray prefix ends before index " + std::to_string(n));
  while (static_cast<int>(ref_.size()) <= n) {
    int i = static_cast<int>(ref_.size());
    VertexId r = ray_.at(fam_, i);
    require(dist(ray_.origin(), r) == i, Err::NotGeodesic,
            "reference ray is not geodesic at index " + std::to_string(i));
    if (i > 0)
      require(dist(ref_.back(), r) == 1, Err::NotGeodesic,
              "reference ray is not a path at index " + std::to_string(i));
    ref_.push_back(r);
  }
  return ref_[n];
}

int Engine::rebase_index(VertexId x) {
  auto it = rebase_.find(x);
  if (it != rebase_.end()) return it->second;
  int top = h_.H;
  long g_top = dist(x, refv(top)) - top;
  int k = top;
  while (k > 0 && dist(x, refv(k - 1)) - (k - 1) == g_top) --k;
  rebase_.emplace(x, k);
  return k;
}

// ---------------------------------------------------------------- CGR machinery

std::vector<VertexId> Engine::targets(VertexId x, int m) {
  VertexId r = refv(m);
  long D = dist(x, r);
  std::vector<VertexId> out;
  for (VertexId w : ball(r, 2 * delta_hat()))
    if (dist(x, w) == D) out.push_back(w);
  return out;  // ball() already sorted
}

const std::vector<CgrPrefix>& Engine::prefixes(VertexId x, int len) {
  int L = len < 0 ? h_.H : len;
  auto key = std::make_pair(x, L);
  auto it = prefixes_.find(key);
  if (it != prefixes_.end()) return it->second;
  int lam = lookahead();
  int k0 = rebase_index(x);
  // ray indices whose target depth reaches L + lam
  long base_depth = dist(x, refv(k0)) - k0;
  std::set<std::vector<VertexId>> stable;
  bool first = true;
  for (int s = h_.S - 1; s >= 0; --s) {
    long depth_wanted = L + lam - s;
    long m = depth_wanted - base_depth;
    require(m >= k0, Err::HorizonTooSmall,
            "prefix targets need ray depth " + std::to_string(depth_wanted));
    std::set<std::vector<VertexId>> cut;
    std::vector<std::vector<VertexId>> paths;
    for (VertexId w : targets(x, static_cast<int>(m))) all_geodesics(x, w, paths);
    for (auto& p : paths) {
      if (static_cast<int>(p.size()) <= L) continue;
      p.resize(L + 1);
      cut.insert(std::move(p));
    }
    require(!cut.empty(), Err::HorizonTooSmall, "no geodesic reaches the prefix targets");
    if (first) {
      stable = std::move(cut);
      first = false;
    } else if (cut != stable) {
      fail(Err::Unstable, "CGR prefix set not stable over " + std::to_string(h_.S) +
                              " consecutive target depths; increase H");
    }
  }
  std::vector<CgrPrefix> out;
  int target_idx = static_cast<int>(L + lam - base_depth);
  for (const auto& p : stable) out.push_back({p, target_idx});
  std::sort(out.begin(), out.end(), [this](const CgrPrefix& a, const CgrPrefix& b) {
    for (std::size_t i = 0; i < std::min(a.verts.size(), b.verts.size()); ++i) {
      if (a.verts[i] != b.verts[i]) return fam_.o().less(a.verts[i], b.verts[i]);
    }
    return a.verts.size() < b.verts.size();
  });
  return prefixes_.emplace(key, std::move(out)).first->second;
}

CertifiedSet Engine::geo_persistence(VertexId x) {
  std::vector<VertexId> bx = ball(x, h_.R);
  std::unordered_set<VertexId> alive(bx.begin(), bx.end());
  // before the re-basing index the reference direction is not yet aligned
  // with x and interval membership toward targets is meaningless
  int m0 = rebase_index(x);
  int last_kill = m0 - 1;
  int scanned_top = m0 - 1;
  for (int m = m0; m <= h_.H; ++m) {
    long D = dist(x, refv(m));
    std::vector<VertexId> tset = targets(x, m);
    std::vector<VertexId> dead;
    for (VertexId v : bx) {
      if (!alive.count(v) || dist(x, v) > D) continue;
      bool member = false;
      for (VertexId w : tset)
        if (on_interval(x, v, w)) {
          member = true;
          break;
        }
      if (!member) dead.push_back(v);
    }
    for (VertexId v : dead) alive.erase(v);
    if (!dead.empty()) last_kill = m;
    scanned_top = m;
  }
  require(scanned_top - last_kill >= h_.S, Err::Unstable,
          "geo window still shrinking near the horizon; increase H");
  std::vector<VertexId> elems;
  for (VertexId v : bx)
    if (alive.count(v)) elems.push_back(v);
  elems = sorted(std::move(elems));
  CertifiedSet out;
  out.stabilized_at = last_kill + 1;
  out.cert = family_cross_check(SetKind::Geo, x, '?', elems, h_.R, x);
  out.elems = std::move(elems);
  return out;
}

// ---------------------------------------------------------------- xi classes

const std::vector<VertexId>& Engine::observation_set() {
  if (obs_.empty()) {
    int r = cfg_.obs_radius >= 0 ? cfg_.obs_radius : std::max(2, 4 * delta_hat());
    obs_ = ball(fam_.o().base_point(), r);
  }
  return obs_;
}

std::vector<long> Engine::target_trace(VertexId w) {
  VertexId z0 = fam_.o().base_point();
  std::vector<long> out;
  out.reserve(observation_set().size());
  for (VertexId y : observation_set()) out.push_back(dist(w, y) - dist(w, z0));
  return out;
}

const std::vector<XiClass>& Engine::xi() {
  if (xi_) return *xi_;
  VertexId z0 = fam_.o().base_point();
  int span = h_.S + 2 * delta_hat() + 2;
  int top = h_.H;
  int m_lo = top - span;
  int k0 = rebase_index(z0);
  int obs_r = cfg_.obs_radius >= 0 ? cfg_.obs_radius : std::max(2, 4 * delta_hat());
  require(m_lo >= k0 && dist(z0, refv(m_lo)) >= obs_r + 2 * delta_hat() + 2, Err::HorizonTooSmall,
          "class enumeration needs H >= " +
              std::to_string(span + k0 + obs_r + 2 * delta_hat() + 2));

  // level data: targets and their observation-set traces
  std::vector<std::vector<VertexId>> lvl(top - m_lo + 1);
  std::vector<std::vector<std::vector<long>>> F(top - m_lo + 1);
  for (int m = m_lo; m <= top; ++m) {
    lvl[m - m_lo] = targets(z0, m);
    for (VertexId w : lvl[m - m_lo]) F[m - m_lo].push_back(target_trace(w));
  }
  // alive chains: constant trace, one step per level, adjacent vertices
  std::vector<std::vector<bool>> alive(lvl.size());
  alive.back().assign(lvl.back().size(), true);
  for (int i = static_cast<int>(lvl.size()) - 2; i >= 0; --i) {
    alive[i].assign(lvl[i].size(), false);
    for (std::size_t a = 0; a < lvl[i].size(); ++a)
      for (std::size_t b = 0; b < lvl[i + 1].size(); ++b)
        if (alive[i + 1][b] && F[i][a] == F[i + 1][b] && dist(lvl[i][a], lvl[i + 1][b]) == 1) {
          alive[i][a] = true;
          break;
        }
  }
  // classes = traces alive at every level
  std::set<std::vector<long>> classes;
  for (std::size_t a = 0; a < lvl[0].size(); ++a)
    if (alive[0][a]) classes.insert(F[0][a]);
  for (std::size_t i = 0; i < lvl.size(); ++i) {
    std::set<std::vector<long>> here;
    for (std::size_t a = 0; a < lvl[i].size(); ++a)
      if (alive[i][a]) here.insert(F[i][a]);
    std::set<std::vector<long>> kept;
    std::set_intersection(classes.begin(), classes.end(), here.begin(), here.end(),
                          std::inserter(kept, kept.end()));
    classes = std::move(kept);
  }
  require(!classes.empty(), Err::Unstable, "no stable horofunction class; increase H");
  int bound = class_count_bound();
  require(static_cast<int>(classes.size()) <= bound, Err::TooManyClasses,
          std::to_string(classes.size()) + " classes exceed the 2*delta ball bound " +
              std::to_string(bound) + "; window inadequate or graph not hyperbolic");

  std::vector<XiClass> out;
  for (const auto& trace : classes) {
    XiClass c;
    c.id = static_cast<int>(out.size());
    c.trace.obs = observation_set();
    c.trace.values = trace;
    c.trace.stabilized_at = m_lo;
    // representative: canonical geodesic to the least alive matching target,
    // then the constant-trace chain up to the horizon
    VertexId w0 = 0;
    bool found = false;
    for (std::size_t a = 0; a < lvl[0].size(); ++a)
      if (alive[0][a] && F[0][a] == trace && (!found || fam_.o().less(lvl[0][a], w0))) {
        w0 = lvl[0][a];
        found = true;
      }
    c.rep = canonical_geodesic(z0, w0);
    VertexId cur = w0;
    for (std::size_t i = 1; i < lvl.size(); ++i) {
      VertexId nxt = 0;
      bool ok = false;
      for (std::size_t b = 0; b < lvl[i].size(); ++b)
        if (alive[i][b] && F[i][b] == trace && dist(cur, lvl[i][b]) == 1 &&
            (!ok || fam_.o().less(lvl[i][b], nxt))) {
          nxt = lvl[i][b];
          ok = true;
        }
      require(ok, Err::Internal, "class chain broke");
      c.rep.push_back(nxt);
      cur = nxt;
    }
    out.push_back(std::move(c));
  }

  // identify with family classes via probe values
  std::string eta = ray_.kind() == RefRay::Kind::Named ? ray_.named() : "";
  for (auto& c : out) {
    auto tag = fam_.classify_trace(eta, [&](const std::string& name) -> long {
      VertexId v = fam_.o().vertex(name);
      return c.trace.value_at(v);
    });
    if (tag) c.family_tag = *tag;
  }
  Cert cert = fam_.is_tree() ? Cert::Exact : Cert::StableObserved;
  if (auto want = fam_.exact_xi_count(eta)) {
    require(static_cast<int>(out.size()) == *want, Err::CalibrationFailed,
            "engine found " + std::to_string(out.size()) + " classes, family oracle says " +
                std::to_string(*want));
    cert = Cert::Exact;
  }
  for (auto& c : out) c.cert = cert;
  xi_ = std::move(out);
  return *xi_;
}

int Engine::class_count_bound() {
  int r = 2 * delta_hat();
  std::size_t best = 1;
  for (VertexId v : {fam_.o().base_point(), refv(h_.H / 2), refv(h_.H)})
    best = std::max(best, ball(v, r).size());
  return static_cast<int>(best);
}

long Engine::trace_value(int cls, VertexId y) {
  const XiClass& c = xi().at(cls);
  for (std::size_t i = 0; i < c.trace.obs.size(); ++i)
    if (c.trace.obs[i] == y) return c.trace.values[i];
  auto key = std::make_pair(cls, y);
  auto it = trace_ext_.find(key);
  if (it != trace_ext_.end()) return it->second;
  // stabilized value of f_{p_n}(y) along the representative tail
  VertexId z0 = fam_.o().base_point();
  const auto& rep = c.rep;
  int L = static_cast<int>(rep.size()) - 1;
  long val = dist(rep[L], y) - dist(rep[L], z0);
  for (int j = L - h_.S; j < L; ++j) {
    require(j >= 0, Err::HorizonTooSmall, "trace extension needs a longer representative");
    long v = dist(rep[j], y) - dist(rep[j], z0);
    require(v == val, Err::Unstable,
            "trace value at " + fam_.o().name(y) + " not stabilized; increase H");
  }
  trace_ext_.emplace(key, val);
  return val;
}

// ---------------------------------------------------------------- sectors

Cert Engine::family_cross_check(SetKind kind, VertexId base, char tag,
                                const std::vector<VertexId>& got, int restrict_radius,
                                VertexId center) {
  std::string eta = ray_.kind() == RefRay::Kind::Named ? ray_.named() : "";
  std::optional<std::function<bool(VertexId)>> pred;
  if (!(kind == SetKind::Sector && tag == '?')) pred = fam_.exact_set(kind, eta, base, tag);
  if (!pred) return fam_.is_tree() ? Cert::Exact : Cert::StableObserved;
  std::vector<VertexId> want;
  for (VertexId v : ball(center, restrict_radius))
    if ((*pred)(v)) want.push_back(v);
  require(want == got, Err::CalibrationFailed,
          "engine result disagrees with the family closed form (" + fam_.o().name(base) + ")");
  return Cert::Exact;
}

SectorData Engine::make_sector(VertexId x, int cls) {
  const XiClass& c = xi().at(cls);
  const auto& rep = c.rep;
  int L = static_cast<int>(rep.size()) - 1;
  // re-base the representative onto x: dist(x, rep_j) - j eventually constant
  long g_top = dist(x, rep[L]) - L;
  int k = L;
  while (k > 0 && dist(x, rep[k - 1]) - (k - 1) == g_top) --k;
  require(L - k >= h_.S, Err::NoConvergentRay,
          "cannot re-base a CGR toward this class at " + fam_.o().name(x) + "; increase H");
  SectorData s;
  s.base = x;
  s.cls = cls;
  s.rebase_index = k;
  s.anchor = rep[L];
  s.full = interval(x, s.anchor);
  s.full_set.insert(s.full.begin(), s.full.end());
  // stability of the restricted window over the last S anchors
  std::vector<VertexId> bx = ball(x, h_.R);
  std::vector<VertexId> restricted;
  for (VertexId v : bx)
    if (s.full_set.count(v)) restricted.push_back(v);
  restricted = sorted(std::move(restricted));
  for (int j = L - h_.S; j < L; ++j) {
    std::vector<VertexId> prev;
    for (VertexId v : bx)
      if (on_interval(x, v, rep[j])) prev.push_back(v);
    prev = sorted(std::move(prev));
    require(prev == restricted, Err::Unstable,
            "sector window not stable over the last " + std::to_string(h_.S) +
                " anchors; increase H");
  }
  s.window.elems = restricted;
  s.window.stabilized_at = k;
  s.window.cert = family_cross_check(SetKind::Sector, x, c.family_tag, restricted, h_.R, x);
  return s;
}

const SectorData& Engine::sector(VertexId x, int cls) {
  auto key = std::make_pair(x, cls);
  auto it = sectors_.find(key);
  if (it != sectors_.end()) return it->second;
  return sectors_.emplace(key, make_sector(x, cls)).first->second;
}

// ---------------------------------------------------------------- specials

SpecialVerdict Engine::special(VertexId x) {
  auto it = specials_.find(x);
  if (it != specials_.end()) return it->second;
  const auto& classes = xi();
  Cert cert = Cert::Exact;
  std::vector<const SectorData*> secs;
  long l_cmp = std::numeric_limits<long>::max();
  for (const auto& c : classes) {
    const SectorData& s = sector(x, c.id);
    secs.push_back(&s);
    cert = weaker(cert, s.window.cert);
    l_cmp = std::min(l_cmp, dist(x, s.anchor));
  }
  long depth_goal = l_cmp;
  // geodesic reachability inside the sector intersection
  auto inside = [&](VertexId v) {
    for (const SectorData* s : secs)
      if (!s->full_set.count(v)) return false;
    return true;
  };
  // the anchors of distinct classes sit up to 2*delta apart, so the finite
  // intersection carries a straight ray only that margin short of them
  depth_goal -= 2 * delta_hat() + 1;
  require(depth_goal >= h_.R, Err::HorizonTooSmall,
          "special test needs deeper anchors; increase H");
  SpecialVerdict verdict;
  verdict.cert = cert;
  std::vector<VertexId> frontier;
  std::map<VertexId, VertexId> parent;
  if (inside(x)) frontier.push_back(x);
  for (long lvl = 0; lvl < depth_goal && !frontier.empty(); ++lvl) {
    std::vector<VertexId> next;
    std::unordered_set<VertexId> seen;
    for (VertexId v : frontier)
      for (VertexId u : fam_.o().neighbors(v)) {
        if (!seen.insert(u).second || !inside(u)) continue;
        if (dist(x, u) != lvl + 1) continue;
        next.push_back(u);
        if (!parent.count(u)) parent[u] = v;
      }
    frontier = sorted(std::move(next));
  }
  if (frontier.empty()) {
    verdict.pass = false;
  } else {
    verdict.pass = true;
    // classify the witness prefix by its stabilized tail trace
    VertexId w = frontier.front();
    std::vector<VertexId> path{w};
    while (path.back() != x) path.push_back(parent.at(path.back()));
    std::reverse(path.begin(), path.end());
    VertexId z0 = fam_.o().base_point();
    std::vector<long> tail_trace;
    std::size_t tail_from =
        path.size() > static_cast<std::size_t>(h_.S) + 1 ? path.size() - h_.S - 1 : 0;
    for (VertexId y : observation_set()) {
      long val = dist(path.back(), y) - dist(path.back(), z0);
      for (std::size_t j = tail_from; j + 1 < path.size(); ++j) {
        long v = dist(path[j], y) - dist(path[j], z0);
        require(v == val, Err::Unstable, "witness trace not stabilized; increase H");
      }
      tail_trace.push_back(val);
    }
    verdict.cls = -1;
    for (const auto& c : classes)
      if (c.trace.values == tail_trace) verdict.cls = c.id;
    require(verdict.cls >= 0, Err::Unstable, "witness trace matches no class; increase H");
  }
  bool fam_sp = false;
  char fam_cls = '?';
  std::string eta = ray_.kind() == RefRay::Kind::Named ? ray_.named() : "";
  if (fam_.exact_special(eta, x, fam_sp, fam_cls)) {
    require(fam_sp == verdict.pass, Err::CalibrationFailed,
            "special verdict disagrees with the family oracle at " + fam_.o().name(x));
    if (verdict.pass)
      require(classes.at(verdict.cls).family_tag == fam_cls, Err::CalibrationFailed,
              "special class disagrees with the family oracle at " + fam_.o().name(x));
    verdict.cert = Cert::Exact;
  }
  specials_.emplace(x, verdict);
  return verdict;
}

std::vector<VertexId> Engine::y_set(VertexId x, int cls) {
  const auto& geo = geo_union(x).first;
  std::vector<VertexId> cands;
  for (VertexId v : geo.window.elems) cands.push_back(v);
  std::stable_sort(cands.begin(), cands.end(), [&](VertexId a, VertexId b) {
    long da = dist(x, a), db = dist(x, b);
    if (da != db) return da < db;
    return fam_.o().less(a, b);
  });
  std::vector<VertexId> out;
  long best = -1;
  for (VertexId v : cands) {
    long d = dist(x, v);
    if (best >= 0 && d > best) break;
    SpecialVerdict sv = special(v);
    if (sv.pass && sv.cls == cls) {
      best = d;
      out.push_back(v);
    }
  }
  require(!out.empty(), Err::NotFoundWithinWindow,
          "no special vertex of class " + std::to_string(cls) + " near " + fam_.o().name(x) +
              "; widen the window");
  return sorted(std::move(out));
}

const std::pair<SectorData, Cert>& Engine::geo_union(VertexId x) {
  auto it = geo_union_.find(x);
  if (it != geo_union_.end()) return it->second;
  SectorData u;
  u.base = x;
  u.cls = -1;
  Cert cert = Cert::Exact;
  std::vector<VertexId> all;
  for (const auto& c : xi()) {
    const SectorData& s = sector(x, c.id);
    cert = weaker(cert, s.window.cert);
    all.insert(all.end(), s.full.begin(), s.full.end());
  }
  u.full = sorted(std::move(all));
  u.full_set.insert(u.full.begin(), u.full.end());
  for (VertexId v : ball(x, h_.R))
    if (u.full_set.count(v)) u.window.elems.push_back(v);
  u.window.elems = sorted(std::move(u.window.elems));
  u.window.cert = weaker(cert, family_cross_check(SetKind::Geo, x, '?', u.window.elems, h_.R, x));
  return geo_union_.emplace(x, std::make_pair(std::move(u), cert)).first->second;
}

const std::pair<SectorData, Cert>& Engine::geo1(VertexId x) {
  auto it = geo1_.find(x);
  if (it != geo1_.end()) return it->second;
  SectorData u;
  u.base = x;
  u.cls = -1;
  Cert cert = Cert::Exact;
  std::vector<VertexId> all;
  for (const auto& c : xi()) {
    for (VertexId y : y_set(x, c.id)) {
      const SectorData& s = sector(y, c.id);
      cert = weaker(cert, s.window.cert);
      all.insert(all.end(), s.full.begin(), s.full.end());
    }
  }
  u.full = sorted(std::move(all));
  u.full_set.insert(u.full.begin(), u.full.end());
  for (VertexId v : ball(x, h_.R))
    if (u.full_set.count(v)) u.window.elems.push_back(v);
  u.window.elems = sorted(std::move(u.window.elems));
  u.window.cert = weaker(cert, family_cross_check(SetKind::Geo1, x, '?', u.window.elems, h_.R, x));
  return geo1_.emplace(x, std::make_pair(std::move(u), cert)).first->second;
}

}  // namespace horohyp
