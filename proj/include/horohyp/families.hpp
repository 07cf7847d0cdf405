#ifndef HOROHYP_FAMILIES_HPP
#define HOROHYP_FAMILIES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "horohyp/graph_core.hpp"
#include "json.hpp"

namespace horohyp {

enum class FamilyKind { FreeGroup, ZLadder, BadLadderI, BadLadderII, A2TildeChamber, Custom };

struct FamilySpec {
  FamilyKind kind = FamilyKind::FreeGroup;
  int rank = 2;                          // FreeGroup
  std::vector<std::string> order_on_S;   // optional, Cayley families only
  std::string custom_text;               // Custom: edge list or multiplication table

  static FamilyKind kind_from_name(const std::string& name);  // throws Parse
  std::string kind_name() const;
  static FamilySpec from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

/// Kinds of vertex sets the built-in families can answer in closed form.
enum class SetKind { Geo, Sector, Geo1 };

/// A built family: the lazy adjacency oracle plus whatever closed-form
/// metadata the family carries (named boundary points, hyperbolicity
/// constant, exact set oracles used for Exact certification).
class Family {
 public:
  FamilySpec spec;
  OraclePtr oracle;

  const AdjacencyOracle& o() const { return *oracle; }
  /// Trees have unique geodesics, which makes every window computation of
  /// the generic engine provably exact.
  bool is_tree() const { return spec.kind == FamilyKind::FreeGroup; }
  std::optional<int> delta_bound() const { return oracle->delta_bound(); }

  /// Named boundary points (the eta of a ladder, the two ends of the
  /// Z-ladder, periodic single-generator points of a free group, the six
  /// chamber directions of the flat triangle tiling).
  std::vector<std::string> boundary_point_names() const;  // NotEnumerable for Custom

  // ---- exact oracles (closed forms established by calibration) ----
  /// Class tags of the horofunction classes toward the named point, in
  /// family-canonical order. Empty when the family has no closed form.
  std::vector<char> exact_class_tags(const std::string& eta) const;
  std::optional<int> exact_xi_count(const std::string& eta) const;
  /// Identify a horofunction trace with a family class by probe values;
  /// `value_at` evaluates the trace at a vertex given by name.
  std::optional<char> classify_trace(
      const std::string& eta, const std::function<long(const std::string&)>& value_at) const;
  /// Closed-form special verdict; returns false when unavailable.
  bool exact_special(const std::string& eta, VertexId v, bool& is_special, char& cls) const;
  /// Membership predicate of the exact set, or nullopt when the family has
  /// no closed form for this base / construction.
  std::optional<std::function<bool(VertexId)>> exact_set(SetKind k, const std::string& eta,
                                                         VertexId base, char cls) const;
};

/// Build a family oracle. Ladders run a handful of calibration distance
/// spot-checks; a violation raises CalibrationFailed (the full identity
/// suite runs in the acceptance tests and the `calibrate` operation).
Family build_family(const FamilySpec& spec);

}  // namespace horohyp

#endif
