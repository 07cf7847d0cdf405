#include "horohyp/horo.hpp"

#include <algorithm>

namespace horohyp {

HoroTrace horotrace_of_prefix(Engine& eng, const std::vector<VertexId>& prefix,
                              const std::vector<VertexId>& obs) {
  require(!prefix.empty(), Err::NotAPath, "empty prefix");
  for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
    require(eng.dist(prefix[i], prefix[i + 1]) == 1, Err::NotAPath,
            "prefix entries are not adjacent");
  require(eng.dist(prefix.front(), prefix.back()) == static_cast<long>(prefix.size()) - 1,
          Err::NotGeodesic, "prefix is not geodesic");
  VertexId z0 = eng.base_point();
  int L = static_cast<int>(prefix.size()) - 1;
  int patience = eng.horizon().S;
  HoroTrace t;
  t.obs = eng.sorted(obs);
  t.stabilized_at = 0;
  for (VertexId y : t.obs) {
    long val = eng.dist(prefix[L], y) - eng.dist(prefix[L], z0);
    int n0 = L;
    while (n0 > 0 && eng.dist(prefix[n0 - 1], y) - eng.dist(prefix[n0 - 1], z0) == val) --n0;
    require(L - n0 >= patience, Err::Unstable,
            "value at " + eng.family().o().name(y) + " not constant for " +
                std::to_string(patience) + " steps; extend the prefix");
    t.values.push_back(val);
    t.stabilized_at = std::max(t.stabilized_at, n0);
  }
  return t;
}

const std::vector<XiClass>& enumerate_xi(Engine& eng) { return eng.xi(); }

SectorWindowResult sector_window(Engine& eng, VertexId x, int cls) {
  require(cls >= 0 && cls < static_cast<int>(eng.xi().size()), Err::Parse,
          "no such class index: " + std::to_string(cls));
  const SectorData& s = eng.sector(x, cls);
  return {x, cls, eng.xi()[cls].family_tag, s.window};
}

long dist_x_xi(Engine& eng, VertexId x, int cls, VertexId a) {
  long v = eng.dist(x, a) + eng.trace_value(cls, a) - eng.trace_value(cls, x);
  require(v >= 0, Err::Internal, "negative displacement; trace values inconsistent");
  return v;
}

StraightVerdict is_straight_prefix(Engine& eng, const std::vector<VertexId>& prefix) {
  require(!prefix.empty(), Err::NotAPath, "empty prefix");
  VertexId x = prefix.front();
  require(eng.dist(x, prefix.back()) == static_cast<long>(prefix.size()) - 1, Err::NotGeodesic,
          "prefix is not geodesic");
  StraightVerdict v;
  v.cert = Cert::Exact;
  long l_cmp = std::numeric_limits<long>::max();
  std::vector<const SectorData*> secs;
  for (const auto& c : eng.xi()) {
    const SectorData& s = eng.sector(x, c.id);
    secs.push_back(&s);
    v.cert = weaker(v.cert, s.window.cert);
    l_cmp = std::min(l_cmp, eng.dist(x, s.anchor));
  }
  l_cmp -= 2 * eng.delta_hat() + 1;  // anchors of distinct classes sit 2*delta apart
  v.pass = true;
  for (std::size_t j = 0; j < prefix.size() && static_cast<long>(j) < l_cmp; ++j)
    for (const SectorData* s : secs)
      if (!s->full_set.count(prefix[j])) {
        v.pass = false;
        v.failing = eng.family().o().name(prefix[j]);
        return v;
      }
  return v;
}

SpecialVerdict is_special(Engine& eng, VertexId x) { return eng.special(x); }

std::vector<VertexId> y_set(Engine& eng, VertexId x, int cls) { return eng.y_set(x, cls); }

CertifiedSet geo1_window(Engine& eng, VertexId x) { return eng.geo1(x).first.window; }

CertifiedSet geo_union_window(Engine& eng, VertexId x) { return eng.geo_union(x).first.window; }

SymdiffReport symdiff_report(Engine& eng, VertexId x, VertexId y, bool geo1_mode,
                             std::vector<int> sweep) {
  if (sweep.empty()) sweep = {eng.horizon().R};
  std::sort(sweep.begin(), sweep.end());
  for (int r : sweep)
    require(r >= 1 && r <= eng.horizon().R, Err::HorizonTooSmall,
            "sweep radius " + std::to_string(r) + " exceeds the horizon R");
  const auto& A = geo1_mode ? eng.geo1(x) : eng.geo_union(x);
  const auto& B = geo1_mode ? eng.geo1(y) : eng.geo_union(y);
  SymdiffReport rep;
  rep.geo1_mode = geo1_mode;
  rep.cert = weaker(A.first.window.cert, B.first.window.cert);
  VertexId z0 = eng.base_point();
  for (int r : sweep) {
    SymdiffRow row{r, -1, 0, false};
    std::vector<VertexId> delta;
    for (VertexId v : eng.ball(z0, r)) {
      bool ina = A.first.full_set.count(v) != 0;
      bool inb = B.first.full_set.count(v) != 0;
      if (ina == inb) continue;
      delta.push_back(v);
      row.max_depth = std::max(row.max_depth, eng.dist(z0, v));
    }
    row.count = delta.size();
    row.outer = row.max_depth > r / 2;
    rep.profile.push_back(row);
    if (r == sweep.back()) rep.delta_elems = eng.sorted(std::move(delta));
  }
  rep.verdict = rep.profile.back().outer ? "UNBOUNDED-TREND" : "BOUNDED";
  return rep;
}

CalibrationReport run_calibration(Engine& eng) {
  CalibrationReport rep;
  auto check = [&](const std::string& name, auto&& fn) {
    bool ok = true;
    std::string why;
    try {
      fn();
    } catch (const Error& e) {
      ok = false;
      why = e.what();
    }
    rep.checks.emplace_back(name, ok);
    if (!ok && rep.pass) {
      rep.pass = false;
      rep.first_failure = name + ": " + why;
    }
  };
  std::vector<std::string> bases;
  switch (eng.family().spec.kind) {
    case FamilyKind::BadLadderI: bases = {"x1", "y1", "z1", "x2", "y3", "z2"}; break;
    case FamilyKind::BadLadderII: bases = {"x1", "y1", "z1"}; break;
    case FamilyKind::ZLadder: bases = {"0,0", "0,1", "2,0"}; break;
    case FamilyKind::FreeGroup: bases = {"e", "a", "ab"}; break;
    default: break;
  }
  check("xi_classes", [&] { eng.xi(); });
  for (const auto& b : bases) {
    VertexId v = eng.family().o().vertex(b);
    check("geo:" + b, [&] { eng.geo_union(v); });
    check("geo_persistence:" + b, [&] { eng.geo_persistence(v); });
    for (const auto& c : eng.xi()) check("sector:" + b, [&] { eng.sector(v, c.id); });
    check("special:" + b, [&] { eng.special(v); });
    check("geo1:" + b, [&] { eng.geo1(v); });
  }
  return rep;
}

}  // namespace horohyp
