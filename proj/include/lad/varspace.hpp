#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lad {

/// x-type variables are base coordinates, t-type are simplex parameters.
enum class VarKind { Base, Simplex };

struct Var {
    std::string name;
    VarKind kind = VarKind::Base;

    bool operator==(const Var&) const = default;
};

class VarSpace;
using VarSpacePtr = std::shared_ptr<const VarSpace>;

/// Immutable ordered variable list. Variables are kept sorted by name so
/// that spaces built in different orders compare equal and merging is
/// commutative; the order then fixes the monomial order of every Poly.
class VarSpace {
  public:
    static VarSpacePtr make(std::vector<Var> vars);
    static VarSpacePtr empty();

    /// Union of two spaces. Same name with different kinds is a mismatch.
    static VarSpacePtr merge(const VarSpace& a, const VarSpace& b);

    size_t size() const { return vars_.size(); }
    const Var& var(size_t i) const { return vars_[i]; }
    const std::vector<Var>& vars() const { return vars_; }

    std::optional<size_t> find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name).has_value(); }

    VarSpacePtr without(const std::vector<std::string>& names) const;

    bool operator==(const VarSpace& o) const { return vars_ == o.vars_; }

  private:
    explicit VarSpace(std::vector<Var> vars) : vars_(std::move(vars)) {}

    std::vector<Var> vars_;
};

inline bool same_space(const VarSpacePtr& a, const VarSpacePtr& b) {
    return a == b || *a == *b;
}

} // namespace lad
