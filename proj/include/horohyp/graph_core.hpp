#ifndef HOROHYP_GRAPH_CORE_HPP
#define HOROHYP_GRAPH_CORE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "horohyp/errors.hpp"

namespace horohyp {

/// Opaque per-graph vertex handle. Equality of handles is equality of
/// vertices; every family keeps an interning table from its canonical
/// encoding (reduced word, coordinate tuple, ...) to handles.
using VertexId = std::uint64_t;

enum class Cmp { LT, EQ, GT };

/// Group structure attached to Cayley-graph families: generator labels,
/// inverses, multiplication, and shortlex normal forms. The total order on
/// the generating set is configuration, not canon.
class CayleyStructure {
 public:
  virtual ~CayleyStructure() = default;
  virtual int num_gens() const = 0;
  virtual const std::string& gen_label(int i) const = 0;
  virtual int gen_inverse(int i) const = 0;
  virtual VertexId identity() const = 0;
  virtual VertexId apply(VertexId v, int gen) const = 0;  // v * s_gen
  virtual VertexId mul(VertexId a, VertexId b) const = 0;
  virtual VertexId inv(VertexId a) const = 0;
  /// Shortlex normal form of v as a sequence of generator indices.
  virtual std::vector<int> word(VertexId v) const = 0;

  void set_order(const std::vector<std::string>& labels);  // throws Parse
  int order_rank(int gen) const { return order_rank_.empty() ? gen : order_rank_[gen]; }
  int gen_by_label(const std::string& label) const;  // throws Parse

  /// Total order: first by word length (= dist(e,.)), ties broken
  /// lexicographically on normal forms under the configured order on S.
  Cmp cmp_shortlex(VertexId u, VertexId v) const;
  Cmp cmp_lex(const std::vector<int>& a, const std::vector<int>& b) const;

 protected:
  std::vector<int> order_rank_;
};

/// Lazy description of a connected, uniformly locally finite graph.
/// Implementations must keep neighbor lists symmetric and free of
/// self-loops; violations surface as OracleAsymmetry / DegreeBoundViolated
/// during window construction.
class AdjacencyOracle {
 public:
  virtual ~AdjacencyOracle() = default;
  virtual std::string family_name() const = 0;
  virtual std::vector<VertexId> neighbors(VertexId v) const = 0;
  virtual VertexId base_point() const = 0;
  virtual int degree_bound() const = 0;
  virtual std::string name(VertexId v) const = 0;
  virtual VertexId vertex(const std::string& name) const = 0;  // throws Parse
  /// Family-canonical total order used for all deterministic set output.
  virtual bool less(VertexId a, VertexId b) const = 0;
  /// Closed-form global path metric, when the family has one.
  virtual std::optional<long> exact_dist(VertexId u, VertexId v) const {
    (void)u; (void)v;
    return std::nullopt;
  }
  virtual const CayleyStructure* cayley() const { return nullptr; }
  virtual CayleyStructure* cayley_mut() { return nullptr; }
  /// A valid slimness constant for the whole family, when known.
  virtual std::optional<int> delta_bound() const { return std::nullopt; }

  std::vector<VertexId> sorted_unique(std::vector<VertexId> v) const;
  std::vector<std::string> names(const std::vector<VertexId>& v) const;
  /// Generator index of the edge step u -> v. Throws NotCayley / NotAPath.
  int gen_step(VertexId u, VertexId v) const;
};

using OraclePtr = std::shared_ptr<const AdjacencyOracle>;

/// Edge-label sequence of a path in a Cayley family (typ of the path).
struct PathType {
  std::vector<int> gens;
  bool operator==(const PathType&) const = default;
  std::string str(const AdjacencyOracle& o) const;
  std::vector<std::string> labels(const AdjacencyOracle& o) const;
};

PathType path_type(const AdjacencyOracle& o, const std::vector<VertexId>& path);
Cmp shortlex_cmp(const AdjacencyOracle& o, VertexId u, VertexId v);

/// Exact metric ball around a center, with a certification contract: a pair
/// (u,v) is certified when any global geodesic between them provably stays
/// inside the ball, i.e. min(d(c,u), d(c,v)) + d_window(u,v) <= radius.
/// Certified distances and intervals agree with the infinite graph.
class Window {
 public:
  Window(OraclePtr oracle, VertexId center, int radius, std::size_t max_vertices = 2000000);

  const AdjacencyOracle& oracle() const { return *oracle_; }
  VertexId center() const { return center_; }
  int radius() const { return radius_; }
  int certified_radius() const { return certified_radius_; }
  const std::vector<VertexId>& vertices() const { return verts_; }
  bool contains(VertexId v) const { return idx_.count(v) != 0; }
  int dist_from_center(VertexId v) const;

  /// Certified global distance; throws Uncertified when the pair cannot be
  /// certified inside this window.
  long dist(VertexId u, VertexId v) const;
  /// Same but always through in-window BFS, ignoring a family closed form.
  long dist_bfs(VertexId u, VertexId v) const;
  bool certified(VertexId u, VertexId v) const;

  /// Exact geodesic interval {z : d(u,z) + d(z,v) = d(u,v)}, sorted.
  std::vector<VertexId> interval(VertexId u, VertexId v) const;
  /// True iff the sequence is a path realizing dist between its endpoints.
  bool is_geodesic(const std::vector<VertexId>& path) const;

  /// Least slimness constant over all geodesic triangles of this window
  /// (adversarial over the choice of geodesic sides). Window-local
  /// certificate; exhaustive, so guarded by a size limit.
  int estimate_delta() const;

  std::string to_json() const;
  std::string to_dot() const;

 private:
  int local(VertexId v) const;
  const std::vector<int>& bfs_from(int src) const;
  long dist_bfs_local(int u, int v) const;
  bool certified_local(int u, int v, long dw) const;

  OraclePtr oracle_;
  VertexId center_;
  int radius_;
  int certified_radius_ = 0;
  std::vector<VertexId> verts_;                // sorted by family order
  std::unordered_map<VertexId, int> idx_;
  std::vector<std::vector<int>> adj_;          // local indices
  std::vector<int> dc_;                        // dist from center (exact global)
  std::vector<std::pair<int, int>> edges_;     // local, a < b positionally
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<int>> bfs_memo_;
};

Window build_window(OraclePtr oracle, VertexId center, int radius);

}  // namespace horohyp

#endif
