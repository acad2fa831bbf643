#include "lad/poly.hpp"

#include "lad/errors.hpp"

#include <algorithm>
#include <numeric>

namespace lad {

bool GradedLexLess::operator()(const std::vector<unsigned>& a,
                               const std::vector<unsigned>& b) const {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db)
        return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Poly Poly::constant(VarSpacePtr space, const Rat& c) {
    Poly p(std::move(space));
    if (!c.is_zero())
        p.terms_.emplace(std::vector<unsigned>(p.space_->size(), 0), c);
    return p;
}

Poly Poly::variable(const VarSpacePtr& space, const std::string& name) {
    auto idx = space->find(name);
    if (!idx)
        fail(ErrorKind::UnknownVariable, "unknown variable '" + name + "'");
    std::vector<unsigned> exps(space->size(), 0);
    exps[*idx] = 1;
    return monomial(space, std::move(exps), Rat(1));
}

Poly Poly::monomial(VarSpacePtr space, std::vector<unsigned> exps, const Rat& c) {
    if (exps.size() != space->size())
        fail(ErrorKind::ShapeError, "exponent vector length does not match space");
    Poly p(std::move(space));
    if (!c.is_zero())
        p.terms_.emplace(std::move(exps), c);
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty())
        return true;
    if (terms_.size() > 1)
        return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
}

Rat Poly::constant_value() const {
    std::vector<unsigned> zero(space_->size(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Rat(0) : it->second;
}

unsigned Poly::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
    return d;
}

unsigned Poly::degree_in(const std::string& name) const {
    auto idx = space_->find(name);
    if (!idx)
        return 0;
    unsigned d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, e[*idx]);
    return d;
}

void Poly::add_term(const std::vector<unsigned>& exps, const Rat& c) {
    if (c.is_zero())
        return;
    auto [it, fresh] = terms_.emplace(exps, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

std::pair<Poly, Poly> Poly::aligned(const Poly& a, const Poly& b) {
    if (same_space(a.space_, b.space_))
        return {a, b};
    VarSpacePtr u = VarSpace::merge(*a.space_, *b.space_);
    return {a.with_space(u), b.with_space(u)};
}

Poly Poly::operator-() const {
    Poly r(space_);
    for (const auto& [e, c] : terms_)
        r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    auto [a, b] = aligned(*this, o);
    for (const auto& [e, c] : b.terms_)
        a.add_term(e, c);
    return a;
}

Poly Poly::operator-(const Poly& o) const {
    auto [a, b] = aligned(*this, o);
    for (const auto& [e, c] : b.terms_)
        a.add_term(e, -c);
    return a;
}

Poly Poly::operator*(const Poly& o) const {
    auto [a, b] = aligned(*this, o);
    Poly r(a.space_);
    std::vector<unsigned> e(a.space_->size());
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly Poly::scale(const Rat& c) const {
    Poly r(space_);
    if (c.is_zero())
        return r;
    for (const auto& [e, k] : terms_)
        r.terms_.emplace(e, k * c);
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = constant(space_, Rat(1));
    for (unsigned i = 0; i < e; ++i)
        r = r * *this;
    return r;
}

Poly Poly::partial(const std::string& name) const {
    auto idx = space_->find(name);
    if (!idx)
        fail(ErrorKind::UnknownVariable, "unknown variable '" + name + "'");
    Poly r(space_);
    for (const auto& [e, c] : terms_) {
        if (e[*idx] == 0)
            continue;
        std::vector<unsigned> d = e;
        d[*idx] -= 1;
        r.add_term(d, c * Rat(static_cast<long>(e[*idx])));
    }
    return r;
}

Poly Poly::compose(const std::map<std::string, Poly>& subst) const {
    // Unify all images onto one space.
    VarSpacePtr target = VarSpace::empty();
    for (size_t i = 0; i < space_->size(); ++i) {
        auto it = subst.find(space_->var(i).name);
        if (it == subst.end())
            fail(ErrorKind::IncompleteSubstitution,
                 "no image for variable '" + space_->var(i).name + "'");
        target = VarSpace::merge(*target, *it->second.space());
    }
    std::vector<Poly> images;
    images.reserve(space_->size());
    for (size_t i = 0; i < space_->size(); ++i)
        images.push_back(subst.at(space_->var(i).name).with_space(target));

    Poly r(target);
    for (const auto& [e, c] : terms_) {
        Poly term = constant(target, c);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] > 0)
                term = term * images[i].pow(e[i]);
        }
        r += term;
    }
    return r;
}

Poly Poly::substitute(const std::string& name, const Rat& value) const {
    auto idx = space_->find(name);
    if (!idx)
        fail(ErrorKind::UnknownVariable, "unknown variable '" + name + "'");
    Poly r(space_->without({name}));
    for (const auto& [e, c] : terms_) {
        Rat k = c;
        for (unsigned i = 0; i < e[*idx]; ++i)
            k *= value;
        std::vector<unsigned> d;
        d.reserve(e.size() - 1);
        for (size_t i = 0; i < e.size(); ++i)
            if (i != *idx)
                d.push_back(e[i]);
        r.add_term(d, k);
    }
    return r;
}

Poly Poly::integrate_simplex(const std::vector<std::string>& tvars) const {
    if (tvars.empty())
        fail(ErrorKind::EmptyIntegrationSet, "simplex integration over no variables");
    std::vector<size_t> idx;
    for (const auto& name : tvars) {
        auto i = space_->find(name);
        if (!i)
            fail(ErrorKind::UnknownVariable, "unknown variable '" + name + "'");
        idx.push_back(*i);
    }
    unsigned long k = tvars.size();
    Poly r(space_->without(tvars));
    for (const auto& [e, c] : terms_) {
        // Monomial moment over the standard simplex: prod(a_i!) / (k + sum a_i)!
        Rat moment(1);
        unsigned long total = 0;
        for (size_t i : idx) {
            moment *= Rat::factorial(e[i]);
            total += e[i];
        }
        moment = moment / Rat::factorial(k + total);
        std::vector<unsigned> d;
        d.reserve(e.size() - idx.size());
        for (size_t i = 0; i < e.size(); ++i) {
            if (std::find(idx.begin(), idx.end(), i) == idx.end())
                d.push_back(e[i]);
        }
        r.add_term(d, c * moment);
    }
    return r;
}

Poly Poly::integrate_cube(const std::vector<std::string>& vars) const {
    if (vars.empty())
        return *this;
    std::vector<size_t> idx;
    for (const auto& name : vars) {
        auto i = space_->find(name);
        if (!i)
            fail(ErrorKind::UnknownVariable, "unknown variable '" + name + "'");
        idx.push_back(*i);
    }
    Poly r(space_->without(vars));
    for (const auto& [e, c] : terms_) {
        Rat factor(1);
        for (size_t i : idx)
            factor = factor / Rat(static_cast<long>(e[i]) + 1);
        std::vector<unsigned> d;
        d.reserve(e.size() - idx.size());
        for (size_t i = 0; i < e.size(); ++i) {
            if (std::find(idx.begin(), idx.end(), i) == idx.end())
                d.push_back(e[i]);
        }
        r.add_term(d, c * factor);
    }
    return r;
}

Poly Poly::with_space(const VarSpacePtr& target) const {
    if (same_space(space_, target))
        return *this;
    // Index of each source variable in the target, or npos if absent.
    std::vector<size_t> map(space_->size(), static_cast<size_t>(-1));
    for (size_t i = 0; i < space_->size(); ++i) {
        const Var& v = space_->var(i);
        auto j = target->find(v.name);
        if (j) {
            if (target->var(*j).kind != v.kind)
                fail(ErrorKind::VarSpaceMismatch,
                     "variable '" + v.name + "' tagged both x-type and t-type");
            map[i] = *j;
        }
    }
    Poly r(target);
    for (const auto& [e, c] : terms_) {
        std::vector<unsigned> d(target->size(), 0);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (map[i] == static_cast<size_t>(-1))
                fail(ErrorKind::VarSpaceMismatch,
                     "variable '" + space_->var(i).name + "' does not exist in target space");
            d[map[i]] = e[i];
        }
        r.add_term(d, c);
    }
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (same_space(space_, o.space_))
        return terms_ == o.terms_;
    auto [a, b] = aligned(*this, o);
    return a.terms_ == b.terms_;
}

std::string Poly::to_string() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        bool neg = c.sign() < 0;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        Rat a = neg ? -c : c;
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += space_->var(i).name;
            if (e[i] > 1)
                mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) {
            out += a.to_string();
        } else if (a == Rat(1)) {
            out += mono;
        } else {
            out += a.to_string() + "*" + mono;
        }
    }
    return out;
}

} // namespace lad
