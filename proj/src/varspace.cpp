#include "lad/varspace.hpp"

#include "lad/errors.hpp"

#include <algorithm>

namespace lad {

VarSpacePtr VarSpace::make(std::vector<Var> vars) {
    std::sort(vars.begin(), vars.end(),
              [](const Var& a, const Var& b) { return a.name < b.name; });
    for (size_t i = 1; i < vars.size(); ++i) {
        if (vars[i].name == vars[i - 1].name)
            fail(ErrorKind::VarClash, "duplicate variable '" + vars[i].name + "'");
    }
    return VarSpacePtr(new VarSpace(std::move(vars)));
}

VarSpacePtr VarSpace::empty() {
    static VarSpacePtr e = make({});
    return e;
}

VarSpacePtr VarSpace::merge(const VarSpace& a, const VarSpace& b) {
    std::vector<Var> out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a.vars_[i].name < b.vars_[j].name)) {
            out.push_back(a.vars_[i++]);
        } else if (i == a.size() || b.vars_[j].name < a.vars_[i].name) {
            out.push_back(b.vars_[j++]);
        } else {
            if (a.vars_[i].kind != b.vars_[j].kind)
                fail(ErrorKind::VarSpaceMismatch,
                     "variable '" + a.vars_[i].name + "' tagged both x-type and t-type");
            out.push_back(a.vars_[i]);
            ++i;
            ++j;
        }
    }
    return VarSpacePtr(new VarSpace(std::move(out)));
}

std::optional<size_t> VarSpace::find(const std::string& name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name,
                               [](const Var& v, const std::string& n) { return v.name < n; });
    if (it != vars_.end() && it->name == name)
        return static_cast<size_t>(it - vars_.begin());
    return std::nullopt;
}

VarSpacePtr VarSpace::without(const std::vector<std::string>& names) const {
    std::vector<Var> out;
    for (const Var& v : vars_) {
        if (std::find(names.begin(), names.end(), v.name) == names.end())
            out.push_back(v);
    }
    return VarSpacePtr(new VarSpace(std::move(out)));
}

} // namespace lad
