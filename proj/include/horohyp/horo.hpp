#ifndef HOROHYP_HORO_HPP
#define HOROHYP_HORO_HPP

#include <string>
#include <vector>

#include "horohyp/engine.hpp"

namespace horohyp {

struct SectorWindowResult {
  VertexId base;
  int cls;
  char family_tag;
  CertifiedSet window;
};

struct StraightVerdict {
  bool pass = false;
  Cert cert = Cert::StableObserved;
  std::string failing;  // first vertex outside some sector, when FAIL
};

struct SymdiffRow {
  int radius;
  long max_depth;  // -1 when the difference is empty
  std::size_t count;
  bool outer;
};

struct SymdiffReport {
  bool geo1_mode;
  std::vector<SymdiffRow> profile;       // one row per sweep radius
  std::vector<VertexId> delta_elems;     // difference at the largest radius
  std::string verdict;                   // BOUNDED | UNBOUNDED-TREND
  Cert cert = Cert::StableObserved;
};

/// Stabilized horofunction values along an explicit CGR prefix, on an
/// explicit observation set.
HoroTrace horotrace_of_prefix(Engine& eng, const std::vector<VertexId>& prefix,
                              const std::vector<VertexId>& obs);
/// CGR-prefix classes from the base point, grouped by stabilized traces.
const std::vector<XiClass>& enumerate_xi(Engine& eng);
/// Combinatorial sector Q(x, xi) within B(x,R).
SectorWindowResult sector_window(Engine& eng, VertexId x, int cls);
/// dist(x,a) + xi(a) - xi(x); non-negative displacement from rays toward xi.
long dist_x_xi(Engine& eng, VertexId x, int cls, VertexId a);
StraightVerdict is_straight_prefix(Engine& eng, const std::vector<VertexId>& prefix);
SpecialVerdict is_special(Engine& eng, VertexId x);
/// Nearest special vertices of the class inside Geo(x,eta).
std::vector<VertexId> y_set(Engine& eng, VertexId x, int cls);
CertifiedSet geo1_window(Engine& eng, VertexId x);
/// Geo(x,eta) as the union of all sectors based at x.
CertifiedSet geo_union_window(Engine& eng, VertexId x);
SymdiffReport symdiff_report(Engine& eng, VertexId x, VertexId y, bool geo1_mode,
                             std::vector<int> sweep);

struct CalibrationReport {
  bool pass = true;
  std::vector<std::pair<std::string, bool>> checks;
  std::string first_failure;
};
/// Exercise every construction against the family's closed forms.
CalibrationReport run_calibration(Engine& eng);

}  // namespace horohyp

#endif
