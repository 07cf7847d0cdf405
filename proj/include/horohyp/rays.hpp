#ifndef HOROHYP_RAYS_HPP
#define HOROHYP_RAYS_HPP

#include <limits>
#include <string>
#include <vector>

#include "horohyp/families.hpp"
#include "horohyp/graph_core.hpp"

namespace horohyp {

/// Truncation parameters for the "for all sufficiently large n" statements:
/// H is the reference-ray index depth, R the reporting window radius, S the
/// stabilization patience (consecutive increments that must agree).
struct Horizon {
  int H = 32;
  int R = 8;
  int S = -1;  // -1: default to 2*delta + 2 at engine construction
  void validate() const {
    require(R >= 1 && H >= R, Err::Parse, "horizon needs H >= R >= 1");
    require(S != 0, Err::Parse, "horizon needs S >= 1");
  }
};

/// How a reported set relates to the infinite object it approximates.
enum class Cert { Exact, StableObserved, Truncated };
const char* cert_name(Cert c);
Cert weaker(Cert a, Cert b);

struct CertifiedSet {
  std::vector<VertexId> elems;  // sorted family-canonical
  Cert cert = Cert::Truncated;
  int stabilized_at = -1;
};

/// Finite description of a boundary point via a reference geodesic ray:
/// either a family-named point, an eventually periodic generator word
/// (Cayley families), or an explicit finite vertex sequence.
class RefRay {
 public:
  enum class Kind { Named, Periodic, ExplicitSeq };

  /// Textual forms: "@eta" / "@eta+" / "@dir3" (family-named),
  /// "origin|prefix|period" with generator words ("e||ab"), or
  /// "seq:v0 v1 v2 ..." (explicit finite prefix).
  static RefRay parse(const Family& fam, const std::string& text);

  Kind kind() const { return kind_; }
  const std::string& named() const { return named_; }
  VertexId origin() const { return origin_; }
  /// n-th vertex of the reference ray (unvalidated closed form; the engine
  /// checks geodesy lazily).
  VertexId at(const Family& fam, int n) const;
  int max_index() const {
    return kind_ == Kind::ExplicitSeq ? static_cast<int>(seq_.size()) - 1
                                      : std::numeric_limits<int>::max();
  }
  /// Ray describing g.eta (Cayley families only).
  RefRay translated(const Family& fam, VertexId g) const;
  std::string text(const Family& fam) const;

 private:
  Kind kind_ = Kind::Named;
  std::string named_;
  VertexId origin_ = 0;
  std::vector<int> prefix_gens_, period_gens_;
  std::vector<VertexId> seq_;
};

/// A certified prefix of a combinatorial geodesic ray: the vertex sequence
/// plus the reference-ray index its enumeration targeted.
struct CgrPrefix {
  std::vector<VertexId> verts;
  int target_index = -1;
};

struct FellowTravelReport {
  bool pass = false;
  int max_deviation = 0;
  int bound = 0;
  std::size_t prefix_count = 0;
};

class Engine;

/// n-th vertex of the reference ray, validated (dist(origin, r_n) = n).
VertexId reference_vertex(Engine& eng, int n);
/// All length-H prefixes of CGRs from x toward the boundary point, obtained
/// as truncations of geodesics to 2*delta-neighborhood targets beyond the
/// horizon, stable over S consecutive target depths.
std::vector<CgrPrefix> enumerate_cgr_prefixes(Engine& eng, VertexId x);
/// Geo(x,eta) within B(x,R): vertices that persist in the interval union
/// toward near-ray targets for every scanned depth.
CertifiedSet geo_window(Engine& eng, VertexId x);
/// Pairwise aligned deviation of enumerated CGR prefixes from x against the
/// 2*delta fellow-traveling bound.
FellowTravelReport fellow_travel_audit(Engine& eng, VertexId x, int delta);

}  // namespace horohyp

#endif
