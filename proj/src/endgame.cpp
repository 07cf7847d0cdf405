#include "horohyp/endgame.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace horohyp {

namespace {

const CayleyStructure& cayley_of(Engine& eng) {
  const CayleyStructure* c = eng.family().o().cayley();
  require(c != nullptr, Err::NotCayley,
          eng.family().spec.kind_name() + " carries no generator labels; endgame needs a Cayley family");
  return *c;
}

}  // namespace

int default_depth_cap(Engine& eng, int n_max) {
  int cap = eng.horizon().H - n_max - eng.lookahead() - 2;
  require(cap >= 2, Err::HorizonTooSmall,
          "endgame depth cap would be " + std::to_string(cap) + "; increase H");
  return cap;
}

CEtaPairs c_eta_window(Engine& eng, int n, int depth_cap) {
  cayley_of(eng);
  require(n >= 0, Err::Parse, "type length must be >= 0");
  if (depth_cap < 0) depth_cap = default_depth_cap(eng, n);
  VertexId e = eng.base_point();
  CEtaPairs out;
  for (VertexId g : eng.geo1(e).first.full) {
    if (eng.dist(e, g) > depth_cap) continue;
    std::set<std::vector<int>> types;
    for (const CgrPrefix& p : eng.prefixes(g, n))
      types.insert(path_type(eng.family().o(), p.verts).gens);
    for (const auto& t : types) out.emplace_back(g, PathType{t});
  }
  return out;
}

PathType s_eta_n(Engine& eng, int n, const InfinitudeProxy& proxy,
                 std::vector<long>* witness_depths, int depth_cap) {
  const CayleyStructure& c = cayley_of(eng);
  int cap = depth_cap < 0 ? default_depth_cap(eng, n) : depth_cap;
  CEtaPairs pairs = c_eta_window(eng, n, cap);
  VertexId e = eng.base_point();
  std::map<std::vector<int>, std::vector<long>> depths;
  for (const auto& [g, t] : pairs) depths[t.gens].push_back(eng.dist(e, g));
  // dyadic band coverage
  std::vector<std::pair<long, long>> bands;
  for (long lo = proxy.band_base; 2 * lo <= cap; lo *= 2) bands.emplace_back(lo, 2 * lo);
  require(!bands.empty(), Err::HorizonTooSmall, "depth cap too small for any witness band");
  const std::vector<int>* best = nullptr;
  const std::vector<long>* best_depths = nullptr;
  for (const auto& [t, ds] : depths) {
    bool ok = true;
    for (auto [lo, hi] : bands) {
      int hits = 0;
      for (long d : ds)
        if (d >= lo && d <= hi) ++hits;
      if (hits < proxy.min_witnesses) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!best || c.cmp_lex(t, *best) == Cmp::LT) {
      best = &t;
      best_depths = &ds;
    }
  }
  require(best != nullptr, Err::NoCandidate,
          "no length-" + std::to_string(n) + " type meets the infinitude proxy; increase H");
  if (witness_depths) *witness_depths = *best_depths;
  return PathType{*best};
}

EndgameRow t_g_k_h(Engine& eng, int n, const InfinitudeProxy& proxy, int depth_cap) {
  const CayleyStructure& c = cayley_of(eng);
  int cap = depth_cap < 0 ? default_depth_cap(eng, n) : depth_cap;
  EndgameRow row;
  row.n = n;
  row.s_n = s_eta_n(eng, n, proxy, &row.witness_depths, cap);
  CEtaPairs pairs = c_eta_window(eng, n, cap);
  std::vector<VertexId> T;
  for (const auto& [g, t] : pairs)
    if (t.gens == row.s_n.gens) T.push_back(g);
  require(!T.empty(), Err::Internal, "empty T_n for the chosen type");
  row.T_n.elems = eng.sorted(std::move(T));
  row.T_n.cert = Cert::Truncated;
  VertexId gmin = row.T_n.elems.front();
  for (VertexId g : row.T_n.elems)
    if (c.cmp_shortlex(g, gmin) == Cmp::LT) gmin = g;
  row.g_n = gmin;
  row.k_n = eng.dist(eng.base_point(), gmin);
  std::vector<VertexId> H;
  VertexId gi = c.inv(gmin);
  for (VertexId t : row.T_n.elems) H.push_back(c.mul(gi, t));
  row.H_n.elems = eng.sorted(std::move(H));
  row.H_n.cert = Cert::Truncated;
  bool has_e = std::find(row.H_n.elems.begin(), row.H_n.elems.end(), c.identity()) !=
               row.H_n.elems.end();
  require(has_e, Err::Internal, "identity missing from H_n");
  return row;
}

EndgameTable endgame_table(Engine& eng, int n_max, const InfinitudeProxy& proxy) {
  require(n_max >= 0, Err::Parse, "n_max must be >= 0");
  EndgameTable table;
  table.depth_cap = default_depth_cap(eng, n_max);
  for (int n = 0; n <= n_max; ++n) table.rows.push_back(t_g_k_h(eng, n, proxy, table.depth_cap));
  for (int n = 0; n < n_max; ++n) {
    const auto& a = table.rows[n].s_n.gens;
    const auto& b = table.rows[n + 1].s_n.gens;
    require(std::equal(a.begin(), a.end(), b.begin()), Err::Unstable,
            "s_n is not an initial segment of s_{n+1} at n=" + std::to_string(n) +
                "; horizon inadequate");
    require(table.rows[n].k_n <= table.rows[n + 1].k_n, Err::Unstable,
            "k_n decreased at n=" + std::to_string(n) + "; horizon inadequate");
  }
  return table;
}

std::string EndgameTable::csv(const AdjacencyOracle& o) const {
  std::ostringstream os;
  os << "n,s_n,|T_n|,g_n,k_n,|H_n|\n";
  for (const auto& r : rows)
    os << r.n << "," << r.s_n.str(o) << "," << r.T_n.elems.size() << "," << o.name(r.g_n) << ","
       << r.k_n << "," << r.H_n.elems.size() << "\n";
  return os.str();
}

ZVerdict z_heuristic(Engine& eng, int n_max, const InfinitudeProxy& proxy) {
  ZVerdict v;
  EndgameTable t = endgame_table(eng, n_max, proxy);
  for (const auto& r : t.rows) v.k_seq.push_back(r.k_n);
  if (n_max < 2) {
    v.verdict = "INCONCLUSIVE";
    return v;
  }
  int tail = std::max(2, n_max / 3);
  bool constant = true;
  for (int i = n_max - tail; i < n_max; ++i)
    if (v.k_seq[i] != v.k_seq[i + 1]) constant = false;
  if (constant) {
    v.verdict = "LIKELY-Z";
    return v;
  }
  long growth = v.k_seq[n_max] - v.k_seq[n_max / 2];
  v.verdict = growth >= std::max(2, (n_max - n_max / 2) / 2) ? "LIKELY-NOT-Z" : "INCONCLUSIVE";
  return v;
}

FnAuditReport fn_class_audit(Engine& eng, VertexId g, int n_max, int delta,
                             const InfinitudeProxy& proxy) {
  const CayleyStructure& c = cayley_of(eng);
  FnAuditReport rep;
  rep.g = eng.family().o().name(g);
  RefRay theta = eng.ray().translated(eng.family(), g);
  Engine engt(eng.family(), theta, eng.horizon(), eng.config());
  EndgameTable te = endgame_table(eng, n_max, proxy);
  EndgameTable tt = endgame_table(engt, n_max, proxy);
  VertexId e = eng.base_point();
  long gd = eng.dist(e, g);
  long safe = te.depth_cap - gd - 8L * delta - 2;
  require(safe >= 2, Err::HorizonTooSmall, "audit needs a larger H for this g");

  // absorption set: (g.Geo1(e,eta)) Delta Geo1(e,theta), finite by the
  // bundle symmetric-difference property
  std::set<VertexId> absorb;
  {
    const auto& ge = eng.geo1(e).first;
    const auto& gt = engt.geo1(e).first;
    std::set<VertexId> trans;
    for (VertexId v : ge.full) trans.insert(c.mul(g, v));
    for (VertexId v : trans)
      if (eng.dist(e, v) <= safe && !gt.full_set.count(v)) absorb.insert(v);
    for (VertexId v : gt.full)
      if (eng.dist(e, v) <= safe && !trans.count(v)) absorb.insert(v);
  }

  std::vector<VertexId> witness_ball = eng.ball(e, 8 * delta);
  for (int n = 0; n <= n_max; ++n) {
    FnAuditRow row;
    row.n = n;
    row.s_equal = te.rows[n].s_n.gens == tt.rows[n].s_n.gens;

    auto capped = [&](const std::vector<VertexId>& vs, long cap, bool translate) {
      std::set<VertexId> out;
      for (VertexId v : vs) {
        VertexId u = translate ? c.mul(g, v) : v;
        if (eng.dist(e, u) <= cap) out.insert(u);
      }
      return out;
    };
    // witness: H_n(eta) = w . H_n(theta) on the safe region
    for (VertexId w : witness_ball) {
      std::set<VertexId> lhs = capped(te.rows[n].H_n.elems, safe, false);
      std::set<VertexId> rhs;
      for (VertexId v : tt.rows[n].H_n.elems) {
        VertexId u = c.mul(w, v);
        if (eng.dist(e, u) <= safe) rhs.insert(u);
      }
      if (lhs == rhs) {
        row.witness_ok = true;
        row.witness = eng.family().o().name(w);
        break;
      }
    }
    // translation mechanism: g.T_n(eta) Delta T_n(theta) inside the
    // absorption set
    std::set<VertexId> gT = capped(te.rows[n].T_n.elems, safe, true);
    std::set<VertexId> Tt = capped(tt.rows[n].T_n.elems, safe, false);
    row.translate_ok = true;
    for (VertexId v : gT)
      if (!Tt.count(v) && !absorb.count(v)) row.translate_ok = false;
    for (VertexId v : Tt)
      if (!gT.count(v) && !absorb.count(v)) row.translate_ok = false;
    rep.rows.push_back(row);
  }
  rep.threshold_n = -1;
  for (int n = n_max; n >= 0; --n) {
    const auto& r = rep.rows[n];
    if (r.s_equal && r.witness_ok && r.translate_ok)
      rep.threshold_n = n;
    else
      break;
  }
  bool all_s = std::all_of(rep.rows.begin(), rep.rows.end(),
                           [](const FnAuditRow& r) { return r.s_equal; });
  rep.pass = all_s && rep.threshold_n >= 0;
  return rep;
}

EquivarianceReport equivariance_check(Engine& eng, VertexId g, VertexId x, int n_max) {
  const CayleyStructure& c = cayley_of(eng);
  EquivarianceReport rep;
  rep.g = eng.family().o().name(g);
  RefRay theta = eng.ray().translated(eng.family(), g);
  Engine engt(eng.family(), theta, eng.horizon(), eng.config());
  VertexId gx = c.mul(g, x);
  std::vector<VertexId> lhs;
  for (VertexId v : eng.geo1(x).first.window.elems) lhs.push_back(c.mul(g, v));
  lhs = eng.sorted(std::move(lhs));
  rep.geo1_ok = lhs == engt.geo1(gx).first.window.elems;
  rep.s_ok = true;
  for (int n = 0; n <= n_max; ++n)
    if (s_eta_n(eng, n, {}).gens != s_eta_n(engt, n, {}).gens) rep.s_ok = false;
  rep.pass = rep.geo1_ok && rep.s_ok;
  return rep;
}

}  // namespace horohyp
