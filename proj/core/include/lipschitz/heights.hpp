#pragma once

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipschitz/graph.hpp"
#include "lipschitz/rational.hpp"

namespace lipschitz {

// Odd integer per vertex, 2-Lipschitz across edges when valid.
struct HeightField {
  std::vector<int> values;

  HeightField() = default;
  explicit HeightField(std::vector<int> v) : values(std::move(v)) {}
  HeightField(int n, int constant) : values(n, constant) {}

  int size() const { return static_cast<int>(values.size()); }
  int operator[](VertexId v) const { return values[v]; }
  int& operator[](VertexId v) { return values[v]; }
  friend auto operator<=>(const HeightField&, const HeightField&) = default;
  friend bool operator==(const HeightField&, const HeightField&) = default;
};

// Edge weight c >= 1, with its exact value when rational.
struct EdgeWeight {
  double value = 1.0;
  std::optional<Rational> exact;

  static EdgeWeight of(const Rational& q);
  static EdgeWeight of(double x);
  // "2", "3/2", "1.5", "sqrt2", "sqrt(2)", "2+sqrt3" and plain decimals.
  static EdgeWeight parse(std::string_view text);
  std::string to_string() const;
};

class Model {
 public:
  Model() = default;
  Model(FiniteGraph graph, std::vector<EdgeWeight> weights);
  static Model uniform(FiniteGraph graph, EdgeWeight c);

  const FiniteGraph& graph() const { return graph_; }
  int num_vertices() const { return graph_.num_vertices(); }
  int num_edges() const { return graph_.num_edges(); }
  const EdgeWeight& weight(EdgeId e) const { return weights_[e]; }
  double c(EdgeId e) const { return weights_[e].value; }
  double log_c(EdgeId e) const { return log_c_[e]; }
  bool is_rational() const { return rational_; }

 private:
  FiniteGraph graph_;
  std::vector<EdgeWeight> weights_;
  std::vector<double> log_c_;
  bool rational_ = true;
};

bool validate_height(const FiniteGraph& g, const HeightField& h);
inline bool validate_height(const Model& m, const HeightField& h) { return validate_height(m.graph(), h); }

// Number of edges with equal endpoint heights.
int flat_edge_count(const FiniteGraph& g, const HeightField& h);
// log W(h) = sum over flat edges of log c_e. Throws InvalidArgument on invalid h.
double log_weight(const Model& m, const HeightField& h);
// W(h) in the requested arithmetic; Rational requires a rational model.
template <class Real>
Real weight(const Model& m, const HeightField& h);

// h = 2f + 1 and back.
HeightField to_height(const std::vector<int>& f);
std::vector<int> to_lipschitz(const HeightField& h);

using ValueSet = std::vector<int>;  // sorted, distinct, odd

ValueSet odd_range(int a, int b);       // {a, a+2, ..., b}
ValueSet plus_minus_range(int a, int b);  // ±[a, b] with 1 <= a <= b

enum class BcKind { single, interval, absolute_value, general };
std::string to_string(BcKind kind);

// Absolute-value form: on S an interval [a, b] with -1 <= a <= b and a + b >= 2,
// elsewhere ±[a, b] with 1 <= a <= b.
struct AbsEntry {
  bool plus = false;  // vertex in S
  int a = 1;
  int b = 1;
};

class BoundaryCondition {
 public:
  BoundaryCondition() = default;
  explicit BoundaryCondition(int num_vertices) : sets_(num_vertices) {}

  // Validates (nonempty, odd), sorts and removes duplicates.
  BoundaryCondition& set(VertexId v, ValueSet values);
  BoundaryCondition& set(VertexId v, int value) { return set(v, ValueSet{value}); }

  int num_vertices() const { return static_cast<int>(sets_.size()); }
  bool constrained(VertexId v) const { return sets_[v].has_value(); }
  const ValueSet& values(VertexId v) const { return *sets_[v]; }
  bool allows(VertexId v, int k) const;
  std::vector<VertexId> support() const;

  BcKind kind() const;
  bool is_single() const;
  bool is_interval() const;
  // Per-vertex absolute-value form, indexed by vertex (unconstrained vertices
  // get a default entry), or nothing when ξ is not of absolute-value type.
  std::optional<std::vector<AbsEntry>> abs_form() const;

  // The condition ξ∘τ⁻¹ for a vertex permutation τ.
  BoundaryCondition permuted(const std::vector<VertexId>& tau) const;
  // x ↦ a - x applied to every value (a even keeps parity odd).
  BoundaryCondition reflected(int a) const;

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  std::vector<std::optional<ValueSet>> sets_;
};

// ξ ≡ {value} on the given vertices.
BoundaryCondition const_bc(int num_vertices, const std::vector<VertexId>& where, int value);
// ξ ≡ {-1, 1} on the given vertices.
BoundaryCondition pm1_bc(int num_vertices, const std::vector<VertexId>& where);

// Pointwise minimal / maximal admissible selection of ξ, or nothing when no
// admissible selection exists. Indexed by vertex; unconstrained entries are 0.
std::optional<std::vector<int>> minimal_selection(const FiniteGraph& g, const BoundaryCondition& xi);
std::optional<std::vector<int>> maximal_selection(const FiniteGraph& g, const BoundaryCondition& xi);

// Throws InvalidArgument when some vertex is not connected to the support.
bool is_admissible(const FiniteGraph& g, const BoundaryCondition& xi);

struct Extensions {
  HeightField min;
  HeightField max;
};
// min(x) = max_v (ξ(v) - 2 d(v, x)), max(x) = min_v (ξ(v) + 2 d(v, x)), using the
// minimal and maximal selections of a set-valued ξ. Throws Inadmissible.
Extensions extremal_extensions(const FiniteGraph& g, const BoundaryCondition& xi);

// ξ ⪯ ξ' for interval-valued conditions on the same support: endpoints ordered.
bool interval_order_leq(const BoundaryCondition& xi, const BoundaryCondition& xi2);
// ξ ⪯_abs ξ'. Throws InvalidArgument for non absolute-value conditions or different supports.
bool abs_order_leq(const BoundaryCondition& xi, const BoundaryCondition& xi2);

}  // namespace lipschitz
