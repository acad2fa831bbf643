#pragma once

#include "lad/rat.hpp"
#include "lad/varspace.hpp"

#include <map>
#include <string>
#include <vector>

namespace lad {

/// Graded lexicographic order on exponent vectors (total degree first,
/// then lex in the space's variable order). Fixes term order for equality,
/// iteration and serialization.
struct GradedLexLess {
    bool operator()(const std::vector<unsigned>& a, const std::vector<unsigned>& b) const;
};

/// Exact multivariate polynomial over Rat, stored as a sparse map from
/// exponent vectors to nonzero coefficients.
class Poly {
  public:
    using TermMap = std::map<std::vector<unsigned>, Rat, GradedLexLess>;

    Poly() : space_(VarSpace::empty()) {}
    explicit Poly(VarSpacePtr space) : space_(std::move(space)) {}

    static Poly constant(VarSpacePtr space, const Rat& c);
    static Poly variable(const VarSpacePtr& space, const std::string& name);
    static Poly monomial(VarSpacePtr space, std::vector<unsigned> exps, const Rat& c);

    const VarSpacePtr& space() const { return space_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Coefficient of the constant monomial (zero if absent).
    Rat constant_value() const;
    unsigned total_degree() const;
    unsigned degree_in(const std::string& name) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }

    Poly scale(const Rat& c) const;
    Poly pow(unsigned e) const;

    /// Formal partial derivative.
    Poly partial(const std::string& name) const;

    /// Simultaneous substitution; every variable of the space needs an image.
    Poly compose(const std::map<std::string, Poly>& subst) const;

    /// Substitutes one variable by a rational and drops it from the space.
    Poly substitute(const std::string& name, const Rat& value) const;

    /// Exact integral over the standard simplex in the given variables;
    /// the result no longer mentions them.
    Poly integrate_simplex(const std::vector<std::string>& tvars) const;

    /// Exact integral over the unit cube in the given variables.
    Poly integrate_cube(const std::vector<std::string>& vars) const;

    /// Reinterprets the polynomial in another space. Variables missing from
    /// the target must not occur in any term.
    Poly with_space(const VarSpacePtr& target) const;

    /// Semantic equality: same terms on the union space.
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    std::string to_string() const;

  private:
    void add_term(const std::vector<unsigned>& exps, const Rat& c);
    static std::pair<Poly, Poly> aligned(const Poly& a, const Poly& b);

    VarSpacePtr space_;
    TermMap terms_;
};

} // namespace lad
