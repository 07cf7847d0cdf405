#ifndef HOROHYP_ENGINE_HPP
#define HOROHYP_ENGINE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "horohyp/rays.hpp"

namespace horohyp {

struct EngineConfig {
  int obs_radius = -1;      // observation-set ball radius; -1: max(2, 4*delta)
  int delta_override = -1;  // override the family slimness bound
  std::uint64_t seed = 0;
  std::size_t path_cap = 200000;    // geodesic enumeration guard
  std::size_t ball_cap = 4000000;   // window materialization guard
};

/// Partial horofunction: stabilized values of f_{x_n} = dist(x_n, .) -
/// dist(x_n, z0) along a class of CGRs, on an observation set.
struct HoroTrace {
  std::vector<VertexId> obs;  // sorted family-canonical
  std::vector<long> values;   // aligned with obs
  int stabilized_at = -1;     // ray index where observed constancy begins
  long value_at(VertexId v) const;  // throws OutsideObservationSet
};

struct XiClass {
  int id = 0;
  char family_tag = '?';  // family class tag when identified, else '?'
  HoroTrace trace;
  std::vector<VertexId> rep;  // representative CGR prefix from the base point
  Cert cert = Cert::StableObserved;
};

struct SpecialVerdict {
  bool pass = false;
  int cls = -1;  // xi class index of the witnessing straight prefix
  Cert cert = Cert::StableObserved;
};

struct SectorData {
  VertexId base;
  int cls;
  std::vector<VertexId> full;      // sorted; the whole accumulated interval
  std::unordered_set<VertexId> full_set;
  CertifiedSet window;             // restricted to B(base, R)
  VertexId anchor;                 // deep vertex of the re-based CGR
  int rebase_index = 0;            // where the representative re-bases onto x
};

/// Shared computation state for one (family, reference ray, horizon)
/// triple: certified metric access (closed form or an auto-sized window),
/// CGR prefix enumeration, horofunction classes, sectors, special vertices.
/// All results are memoized; instances are not thread-safe.
class Engine {
 public:
  Engine(Family fam, RefRay ray, Horizon h, EngineConfig cfg = {});

  const Family& family() const { return fam_; }
  const RefRay& ray() const { return ray_; }
  const Horizon& horizon() const { return h_; }
  const EngineConfig& config() const { return cfg_; }
  /// Working slimness bound (family constant, override, or estimated).
  int delta_hat();
  int lookahead() { return 2 * delta_hat() + h_.S; }
  bool hyperbolic_ok();

  // ---- metric layer (certified; windows grow on demand) ----
  long dist(VertexId u, VertexId v);
  std::vector<VertexId> neighbors(VertexId v) { return fam_.o().neighbors(v); }
  std::vector<VertexId> ball(VertexId x, int r);
  std::vector<VertexId> interval(VertexId x, VertexId w);
  bool on_interval(VertexId x, VertexId v, VertexId w) {
    return dist(x, v) + dist(v, w) == dist(x, w);
  }
  /// One canonical geodesic from x to w (least neighbor at every step).
  std::vector<VertexId> canonical_geodesic(VertexId x, VertexId w);
  /// All geodesics from x to w (guarded by path_cap).
  void all_geodesics(VertexId x, VertexId w, std::vector<std::vector<VertexId>>& out);

  // ---- reference ray ----
  VertexId refv(int n);  // validated: dist(origin, r_n) = n
  VertexId base_point() { return fam_.o().base_point(); }

  // ---- CGR machinery ----
  /// Near-ray targets at ray index m as seen from x: the vertices of
  /// B(r_m, 2*delta) at the same distance from x as r_m.
  std::vector<VertexId> targets(VertexId x, int m);
  /// Length-`len` truncations of geodesics toward the lookahead targets
  /// (len = -1 means the horizon H), stable over S consecutive depths.
  const std::vector<CgrPrefix>& prefixes(VertexId x, int len = -1);
  CertifiedSet geo_persistence(VertexId x);

  // ---- horofunction classes ----
  const std::vector<XiClass>& xi();
  const std::vector<VertexId>& observation_set();
  /// Stabilized trace value of class `cls` at an arbitrary vertex.
  long trace_value(int cls, VertexId y);
  const SectorData& sector(VertexId x, int cls);
  SpecialVerdict special(VertexId x);
  std::vector<VertexId> y_set(VertexId x, int cls);
  /// Geo1 within B(x,R) plus the full accumulated set.
  const std::pair<SectorData, Cert>& geo1(VertexId x);
  /// Geo(x,eta) as the union of all sectors at x (full accumulated sets).
  const std::pair<SectorData, Cert>& geo_union(VertexId x);

  /// Sort a vertex list by the family canonical order.
  std::vector<VertexId> sorted(std::vector<VertexId> v) { return fam_.o().sorted_unique(std::move(v)); }
  /// Upper bound for |Xi(eta)|: the largest 2*delta ball seen near the ray.
  int class_count_bound();

 private:
  long dist_window(VertexId u, VertexId v);
  void grow_window(VertexId must_contain, int need_radius);
  int rebase_index(VertexId x);  // least m with dist(x, r_n) - n constant to H
  std::vector<long> target_trace(VertexId w);  // f_w on the observation set
  SectorData make_sector(VertexId x, int cls);
  Cert family_cross_check(SetKind kind, VertexId base, char tag,
                          const std::vector<VertexId>& got, int restrict_radius, VertexId center);

  Family fam_;
  RefRay ray_;
  Horizon h_;
  EngineConfig cfg_;
  std::optional<int> delta_;
  std::optional<Window> win_;
  int win_radius_ = 0;
  std::vector<VertexId> ref_;  // validated reference vertices
  std::optional<std::vector<XiClass>> xi_;
  std::vector<VertexId> obs_;
  std::map<std::pair<VertexId, int>, SectorData> sectors_;
  std::map<std::pair<VertexId, int>, std::vector<CgrPrefix>> prefixes_;
  std::map<VertexId, SpecialVerdict> specials_;
  std::map<VertexId, std::pair<SectorData, Cert>> geo1_, geo_union_;
  std::map<std::pair<int, VertexId>, long> trace_ext_;
  std::map<VertexId, int> rebase_;
};

}  // namespace horohyp

#endif
