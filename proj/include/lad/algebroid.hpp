#pragma once

#include "lad/poly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lad {

class ChartAlgebroid;
using AlgebroidPtr = std::shared_ptr<const ChartAlgebroid>;

/// Marks an algebroid built as TR^k x A, remembering the inner factor and
/// the k simplex variables in simplex order t^1..t^k. Fiber integration
/// refuses algebroids without this tag.
struct ProlongationTag {
    size_t k = 0;
    AlgebroidPtr inner;
    std::vector<std::string> tvars;
};

struct Violation {
    enum class Type { AnchorCompat, Jacobi, MorphismAnchor, MorphismBracket };
    Type type;
    std::vector<size_t> indices; // 1-based frame indices for display
    std::string detail;

    std::string to_string() const;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// A Lie algebroid presented on one polynomial chart with a global frame:
/// anchor matrix rho^j_alpha and structure functions c^gamma_{alpha beta}.
/// The bracket of arbitrary sections is the Leibniz extension of the frame
/// data. Values are immutable; the validation report is computed once at
/// construction.
class ChartAlgebroid {
  public:
    using StructureMap = std::map<std::pair<size_t, size_t>, std::vector<Poly>>;

    static AlgebroidPtr make(std::string name, VarSpacePtr base,
                             std::vector<std::string> frame_names,
                             std::vector<std::vector<Poly>> anchor,
                             StructureMap structure,
                             std::optional<ProlongationTag> tag = std::nullopt);

    /// Tangent algebroid of the chart with the given variables; frame
    /// element for variable v is named "d" + v.
    static AlgebroidPtr tangent(const std::vector<std::string>& base_vars,
                                VarKind kind = VarKind::Base,
                                std::string name = "");

    /// Lie algebra over a point: zero-dimensional base, constant structure.
    static AlgebroidPtr point(std::string name, std::vector<std::string> frame_names,
                              const std::map<std::pair<size_t, size_t>, std::vector<Rat>>& structure);

    const std::string& name() const { return name_; }
    size_t rank() const { return frame_names_.size(); }
    size_t base_dim() const { return base_->size(); }
    const VarSpacePtr& base() const { return base_; }
    const std::vector<std::string>& frame_names() const { return frame_names_; }
    size_t frame_index(const std::string& name) const;
    const std::vector<std::vector<Poly>>& anchor() const { return anchor_; }
    const StructureMap& structure() const { return structure_; }

    /// c^gamma_{alpha beta} for arbitrary indices, extended by antisymmetry.
    Poly structure_fn(size_t gamma, size_t alpha, size_t beta) const;
    /// Coefficient vector of [e_alpha, e_beta].
    std::vector<Poly> frame_bracket(size_t alpha, size_t beta) const;
    /// Derivation rho(e_alpha) applied to p.
    Poly frame_anchor_apply(size_t alpha, const Poly& p) const;

    bool is_point() const { return base_dim() == 0; }
    const std::optional<ProlongationTag>& prolongation() const { return tag_; }
    bool is_valid() const { return report_.ok(); }
    const ValidationReport& validation() const { return report_; }

    bool operator==(const ChartAlgebroid& o) const;

  private:
    ChartAlgebroid() = default;
    ValidationReport compute_validation() const;

    std::string name_;
    VarSpacePtr base_;
    std::vector<std::string> frame_names_;
    std::vector<std::vector<Poly>> anchor_; // rank x base_dim, columns in base var order
    StructureMap structure_;                // keys (alpha, beta) with alpha < beta
    std::optional<ProlongationTag> tag_;
    ValidationReport report_;
};

/// Element of Gamma(A): one Poly coefficient per frame element.
struct Section {
    AlgebroidPtr owner;
    std::vector<Poly> coeff;
};

Section make_section(AlgebroidPtr owner, std::vector<Poly> coeff);
Section zero_section(AlgebroidPtr owner);
Section frame_section(AlgebroidPtr owner, size_t alpha);
Section add(const Section& a, const Section& b);
Section subtract(const Section& a, const Section& b);
Section scale(const Section& a, const Poly& f);
bool same_owner(const Section& a, const Section& b);
bool is_zero(const Section& a);
std::string section_to_string(const Section& a);

/// Leibniz-extended bracket of two sections of the same algebroid.
Section bracket(const Section& a, const Section& b);
/// rho(a) acting on p as a derivation.
Poly anchor_apply(const Section& a, const Poly& p);

/// Lie algebroid morphism over a polynomial base map. base_map holds one
/// Poly per target base variable (in target base order); fiber is
/// rank(target) x rank(source), all entries over the source base.
struct ChartMorphism {
    AlgebroidPtr source;
    AlgebroidPtr target;
    std::vector<Poly> base_map;
    std::vector<std::vector<Poly>> fiber;

    bool operator==(const ChartMorphism& o) const;
};

ChartMorphism identity_morphism(const AlgebroidPtr& a);
/// Composition: phi after psi.
ChartMorphism compose_morphisms(const ChartMorphism& phi, const ChartMorphism& psi);
ValidationReport validate_morphism(const ChartMorphism& m);
/// Substitutes the base map into a function on the target base.
Poly pull_function(const ChartMorphism& m, const Poly& p);
bool base_preserving(const ChartMorphism& m);
/// Pushes a section through a base-preserving morphism.
Section push_section(const ChartMorphism& m, const Section& a);

/// Cartesian product; base variables and frame names must be disjoint.
AlgebroidPtr product(const AlgebroidPtr& a, const AlgebroidPtr& b);
/// TR^k x A with fresh simplex variables and the prolongation tag set.
AlgebroidPtr prolong(size_t k, const AlgebroidPtr& a);
/// Renames base variables and/or frame elements.
AlgebroidPtr rename(const AlgebroidPtr& a,
                    const std::map<std::string, std::string>& var_renames,
                    const std::map<std::string, std::string>& frame_renames);

/// The section (d/dt^j, 0) of a prolongation, j in [0, k).
Section t_frame_section(const AlgebroidPtr& prolonged, size_t j);
/// Includes a section of the inner factor with zero t-part.
Section include_section(const AlgebroidPtr& prolonged, const Section& a);

/// Difference between the Theorem-1 inverse-image bracket computed from
/// explicit frame decompositions and the image of the product bracket
/// under Psi(u, w) = (u, rho(w), w). Both parts are expected to vanish.
struct PsiReport {
    std::vector<Poly> vector_field_diff; // indexed by prolongation base vars
    std::vector<Poly> fiber_diff;        // indexed by inner frame

    bool ok() const;
    std::string to_string() const;
};

PsiReport psi_check(const Section& a, const Section& b);

} // namespace lad
