#ifndef HOROHYP_ENDGAME_HPP
#define HOROHYP_ENDGAME_HPP

#include <string>
#include <vector>

#include "horohyp/engine.hpp"

namespace horohyp {

/// Finite proxy for "appears infinitely often": a type string qualifies iff
/// it has witness basepoints in every dyadic depth band [b*2^i, b*2^(i+1)]
/// of the scanned range.
struct InfinitudeProxy {
  int band_base = 2;
  int min_witnesses = 1;
};

struct EndgameRow {
  int n = 0;
  PathType s_n;
  CertifiedSet T_n;  // truncated to the depth cap
  VertexId g_n = 0;
  long k_n = 0;
  CertifiedSet H_n;
  std::vector<long> witness_depths;  // depth profile behind s_n
};

struct EndgameTable {
  std::vector<EndgameRow> rows;
  int depth_cap = 0;
  std::string csv(const AdjacencyOracle& o) const;
};

using CEtaPairs = std::vector<std::pair<VertexId, PathType>>;

/// Pairs (g, typ of a length-n CGR prefix from g) over Geo1(e, eta),
/// truncated at the depth cap (default: derived from the horizon).
CEtaPairs c_eta_window(Engine& eng, int n, int depth_cap = -1);
int default_depth_cap(Engine& eng, int n_max);
PathType s_eta_n(Engine& eng, int n, const InfinitudeProxy& proxy,
                 std::vector<long>* witness_depths = nullptr, int depth_cap = -1);
EndgameRow t_g_k_h(Engine& eng, int n, const InfinitudeProxy& proxy, int depth_cap = -1);
/// Rows 0..n_max with the coherence invariants enforced.
EndgameTable endgame_table(Engine& eng, int n_max, const InfinitudeProxy& proxy = {});

struct ZVerdict {
  std::string verdict;  // LIKELY-Z | LIKELY-NOT-Z | INCONCLUSIVE
  std::vector<long> k_seq;
};
ZVerdict z_heuristic(Engine& eng, int n_max, const InfinitudeProxy& proxy = {});

struct FnAuditRow {
  int n = 0;
  bool s_equal = false;
  bool witness_ok = false;
  std::string witness;  // the w with H_n(eta) = w . H_n(theta)
  bool translate_ok = false;
};

struct FnAuditReport {
  std::string g;
  bool pass = false;
  int threshold_n = -1;  // first n from which every later row passes
  std::vector<FnAuditRow> rows;
};

/// Orbit-pair audit for theta = g.eta: s_n equality, an H_n translation
/// witness within dist(e,w) <= 8*delta, and absorption of g.T_n(eta) vs
/// T_n(theta) into the finite Geo1 symmetric difference.
FnAuditReport fn_class_audit(Engine& eng, VertexId g, int n_max, int delta,
                             const InfinitudeProxy& proxy = {});

struct EquivarianceReport {
  std::string g;
  bool geo1_ok = false;
  bool s_ok = false;
  bool pass = false;
};
/// Checks g.Geo1(x,eta) = Geo1(gx, g.eta) and s_n(eta) = s_n(g.eta).
EquivarianceReport equivariance_check(Engine& eng, VertexId g, VertexId x, int n_max);

}  // namespace horohyp

#endif
