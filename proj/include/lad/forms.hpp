#pragma once

#include "lad/algebroid.hpp"

#include <memory>
#include <vector>

namespace lad {

/// All strictly increasing n-tuples from {0..r-1}, lexicographically ordered.
const std::vector<std::vector<size_t>>& combinations(size_t r, size_t n);

/// C-infinity-multilinear alternating form: one Poly component per strictly
/// increasing frame multi-index. Degree 0 is a single function.
class TensorForm {
  public:
    TensorForm(AlgebroidPtr owner, size_t degree);
    static TensorForm function(AlgebroidPtr owner, const Poly& f);
    /// Dual-basis wedge e^{i_1} ^ ... ^ e^{i_n} for an increasing tuple.
    static TensorForm basis(AlgebroidPtr owner, const std::vector<size_t>& idx);

    const AlgebroidPtr& owner() const { return owner_; }
    size_t degree() const { return degree_; }
    const std::vector<Poly>& components() const { return comps_; }
    const std::vector<std::vector<size_t>>& index_tuples() const;

    const Poly& component(const std::vector<size_t>& increasing) const;
    void set_component(const std::vector<size_t>& increasing, Poly value);
    /// Component for an arbitrary tuple, respecting alternation.
    Poly signed_component(const std::vector<size_t>& tuple) const;

    bool is_zero() const;
    TensorForm operator+(const TensorForm& o) const;
    TensorForm operator-(const TensorForm& o) const;
    TensorForm operator-() const;
    TensorForm scale(const Rat& c) const;
    TensorForm scale_poly(const Poly& f) const;

    /// Full alternating contraction against a section tuple.
    Poly eval(const std::vector<Section>& args) const;

    /// Exterior differential in the frame presentation.
    TensorForm d() const;

    /// Shuffle-sum wedge, no factorial normalization.
    TensorForm wedge(const TensorForm& o) const;

    bool operator==(const TensorForm& o) const;
    std::string to_string() const;

  private:
    AlgebroidPtr owner_;
    size_t degree_;
    std::vector<Poly> comps_;
};

/// Pullback along a morphism: components contract the fiber matrix and
/// substitute the base map.
TensorForm pullback(const ChartMorphism& m, const TensorForm& form);

class RLinearForm;
using RFormPtr = std::shared_ptr<const RLinearForm>;

/// R-multilinear alternating form as a lazy combinator tree. Nodes are never
/// materialized into coefficient arrays; evaluation walks the tree.
class RLinearForm {
  public:
    enum class Kind { Tensor, Sum, ScalarMul, Wedge, CubeAvg, Dr, SimplexInt, Pullback };

    static RFormPtr tensor(TensorForm form);
    static RFormPtr sum(RFormPtr a, RFormPtr b);
    static RFormPtr scalar_mul(Poly f, RFormPtr a);
    static RFormPtr wedge(RFormPtr a, RFormPtr b);
    /// Averages the evaluation over the unit cube in x-type variables.
    static RFormPtr cube_avg(RFormPtr a, std::vector<std::string> avg_vars);
    /// Lazy differential; owner must be a valid Lie algebroid.
    static RFormPtr dr(RFormPtr a);
    /// Fiber integration over the standard k-simplex of the owner's
    /// prolongation variables; the result lives on the inner factor.
    static RFormPtr simplex_integral(size_t k, RFormPtr a);
    /// Argument precomposition along a base-preserving morphism.
    static RFormPtr pullback_along(ChartMorphism m, RFormPtr on_target);

    Kind kind() const { return kind_; }
    const AlgebroidPtr& owner() const { return owner_; }
    size_t degree() const { return degree_; }

    Poly eval(const std::vector<Section>& args) const;

    const TensorForm* tensor_leaf() const { return tensor_ ? &*tensor_ : nullptr; }
    const RFormPtr& child_a() const { return a_; }
    const RFormPtr& child_b() const { return b_; }
    const Poly& scalar() const { return scalar_; }
    const std::vector<std::string>& avg_vars() const { return avg_vars_; }
    size_t simplex_k() const { return simplex_k_; }
    const ChartMorphism* morphism() const { return morphism_ ? &*morphism_ : nullptr; }

    std::string to_string() const;

  private:
    RLinearForm() = default;

    AlgebroidPtr owner_;
    size_t degree_ = 0;
    Kind kind_ = Kind::Tensor;
    std::optional<TensorForm> tensor_;
    RFormPtr a_, b_;
    Poly scalar_;
    std::vector<std::string> avg_vars_;
    size_t simplex_k_ = 0;
    std::optional<ChartMorphism> morphism_;
};

/// d_{A,R}: wraps the form in a lazy differential node.
RFormPtr r_d(const RFormPtr& form);

/// The nonlocal form of a tensor form: averaged over the unit cube in the
/// given x-type chart variables.
RFormPtr make_integrated(TensorForm form, std::vector<std::string> avg_vars);

} // namespace lad
