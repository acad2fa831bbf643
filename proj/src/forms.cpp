#include "lad/forms.hpp"

#include "lad/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

namespace lad {

namespace {

// Parity of the permutation sorting `tuple`; nullopt when entries repeat.
std::optional<int> sort_sign(std::vector<size_t>& tuple) {
    int sign = 1;
    for (size_t i = 1; i < tuple.size(); ++i) {
        size_t j = i;
        while (j > 0 && tuple[j - 1] > tuple[j]) {
            std::swap(tuple[j - 1], tuple[j]);
            sign = -sign;
            --j;
        }
    }
    for (size_t i = 1; i < tuple.size(); ++i)
        if (tuple[i] == tuple[i - 1])
            return std::nullopt;
    return sign;
}

// Determinant of an n x n Poly matrix given by an accessor, cofactor
// expansion with zero skipping.
Poly determinant(size_t n, const VarSpacePtr& space,
                 const std::function<const Poly&(size_t, size_t)>& at) {
    std::function<Poly(size_t, size_t)> rec = [&](size_t row, size_t used_mask) -> Poly {
        if (row == n)
            return Poly::constant(space, Rat(1));
        Poly acc(space);
        int sign = 1;
        for (size_t col = 0; col < n; ++col) {
            if (used_mask & (size_t(1) << col)) {
                continue;
            }
            const Poly& entry = at(row, col);
            if (!entry.is_zero()) {
                Poly sub = rec(row + 1, used_mask | (size_t(1) << col));
                if (!sub.is_zero()) {
                    Poly term = entry * sub;
                    acc += sign > 0 ? term : -term;
                }
            }
            sign = -sign;
        }
        return acc;
    };
    return rec(0, 0);
}

void check_args(const AlgebroidPtr& owner, size_t degree, const std::vector<Section>& args) {
    if (args.size() != degree)
        fail(ErrorKind::ArityMismatch, "form of degree " + std::to_string(degree) +
                                           " evaluated on " + std::to_string(args.size()) +
                                           " sections");
    for (const auto& a : args)
        if (!(a.owner == owner || *a.owner == *owner))
            fail(ErrorKind::AlgebroidMismatch, "section does not belong to the form's algebroid");
}

} // namespace

const std::vector<std::vector<size_t>>& combinations(size_t r, size_t n) {
    static std::map<std::pair<size_t, size_t>, std::vector<std::vector<size_t>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(r, n);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;

    std::vector<std::vector<size_t>> out;
    if (n <= r) {
        std::vector<size_t> cur(n);
        for (size_t i = 0; i < n; ++i)
            cur[i] = i;
        while (true) {
            out.push_back(cur);
            if (n == 0)
                break;
            size_t i = n;
            while (i > 0 && cur[i - 1] == r - n + (i - 1))
                --i;
            if (i == 0)
                break;
            ++cur[i - 1];
            for (size_t j = i; j < n; ++j)
                cur[j] = cur[j - 1] + 1;
        }
    }
    return cache.emplace(key, std::move(out)).first->second;
}

TensorForm::TensorForm(AlgebroidPtr owner, size_t degree)
    : owner_(std::move(owner)), degree_(degree) {
    comps_.assign(combinations(owner_->rank(), degree_).size(), Poly(owner_->base()));
}

TensorForm TensorForm::function(AlgebroidPtr owner, const Poly& f) {
    TensorForm form(std::move(owner), 0);
    form.comps_[0] = f.with_space(form.owner_->base());
    return form;
}

TensorForm TensorForm::basis(AlgebroidPtr owner, const std::vector<size_t>& idx) {
    TensorForm form(std::move(owner), idx.size());
    form.set_component(idx, Poly::constant(form.owner_->base(), Rat(1)));
    return form;
}

const std::vector<std::vector<size_t>>& TensorForm::index_tuples() const {
    return combinations(owner_->rank(), degree_);
}

const Poly& TensorForm::component(const std::vector<size_t>& increasing) const {
    const auto& tuples = index_tuples();
    auto it = std::lower_bound(tuples.begin(), tuples.end(), increasing);
    if (it == tuples.end() || *it != increasing)
        fail(ErrorKind::ShapeError, "component index is not a strictly increasing frame tuple");
    return comps_[it - tuples.begin()];
}

void TensorForm::set_component(const std::vector<size_t>& increasing, Poly value) {
    const auto& tuples = index_tuples();
    auto it = std::lower_bound(tuples.begin(), tuples.end(), increasing);
    if (it == tuples.end() || *it != increasing)
        fail(ErrorKind::ShapeError, "component index is not a strictly increasing frame tuple");
    comps_[it - tuples.begin()] = value.with_space(owner_->base());
}

Poly TensorForm::signed_component(const std::vector<size_t>& tuple) const {
    std::vector<size_t> sorted = tuple;
    auto sign = sort_sign(sorted);
    if (!sign)
        return Poly(owner_->base());
    const Poly& c = component(sorted);
    return *sign > 0 ? c : -c;
}

bool TensorForm::is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const Poly& p) { return p.is_zero(); });
}

TensorForm TensorForm::operator+(const TensorForm& o) const {
    if (!(*owner_ == *o.owner_))
        fail(ErrorKind::AlgebroidMismatch, "forms on different algebroids");
    if (degree_ != o.degree_)
        fail(ErrorKind::ArityMismatch, "forms of different degrees");
    TensorForm out = *this;
    for (size_t i = 0; i < comps_.size(); ++i)
        out.comps_[i] += o.comps_[i];
    return out;
}

TensorForm TensorForm::operator-(const TensorForm& o) const { return *this + (-o); }

TensorForm TensorForm::operator-() const {
    TensorForm out = *this;
    for (auto& c : out.comps_)
        c = -c;
    return out;
}

TensorForm TensorForm::scale(const Rat& c) const {
    TensorForm out = *this;
    for (auto& p : out.comps_)
        p = p.scale(c);
    return out;
}

TensorForm TensorForm::scale_poly(const Poly& f) const {
    TensorForm out = *this;
    Poly g = f.with_space(owner_->base());
    for (auto& p : out.comps_)
        p = p * g;
    return out;
}

Poly TensorForm::eval(const std::vector<Section>& args) const {
    check_args(owner_, degree_, args);
    if (degree_ == 0)
        return comps_[0];
    Poly out(owner_->base());
    const auto& tuples = index_tuples();
    for (size_t t = 0; t < tuples.size(); ++t) {
        if (comps_[t].is_zero())
            continue;
        const auto& beta = tuples[t];
        Poly det = determinant(degree_, owner_->base(), [&](size_t i, size_t j) -> const Poly& {
            return args[i].coeff[beta[j]];
        });
        if (!det.is_zero())
            out += comps_[t] * det;
    }
    return out;
}

TensorForm TensorForm::d() const {
    TensorForm out(owner_, degree_ + 1);
    const auto& tuples = out.index_tuples();
    for (size_t t = 0; t < tuples.size(); ++t) {
        const auto& gamma = tuples[t];
        Poly acc(owner_->base());
        for (size_t i = 0; i <= degree_; ++i) {
            std::vector<size_t> rest;
            rest.reserve(degree_);
            for (size_t a = 0; a < gamma.size(); ++a)
                if (a != i)
                    rest.push_back(gamma[a]);
            Poly term = owner_->frame_anchor_apply(gamma[i], component(rest));
            if (!term.is_zero())
                acc += (i % 2 == 0) ? term : -term;
        }
        for (size_t i = 0; i < gamma.size(); ++i) {
            for (size_t j = i + 1; j < gamma.size(); ++j) {
                std::vector<size_t> rest;
                for (size_t a = 0; a < gamma.size(); ++a)
                    if (a != i && a != j)
                        rest.push_back(gamma[a]);
                for (size_t delta = 0; delta < owner_->rank(); ++delta) {
                    Poly c = owner_->structure_fn(delta, gamma[i], gamma[j]);
                    if (c.is_zero())
                        continue;
                    std::vector<size_t> idx;
                    idx.reserve(rest.size() + 1);
                    idx.push_back(delta);
                    idx.insert(idx.end(), rest.begin(), rest.end());
                    Poly comp = signed_component(idx);
                    if (comp.is_zero())
                        continue;
                    Poly term = c * comp;
                    acc += ((i + j) % 2 == 0) ? term : -term;
                }
            }
        }
        out.comps_[t] = acc;
    }
    return out;
}

TensorForm TensorForm::wedge(const TensorForm& o) const {
    if (!(*owner_ == *o.owner_))
        fail(ErrorKind::AlgebroidMismatch, "wedge of forms on different algebroids");
    size_t p = degree_, q = o.degree_;
    TensorForm out(owner_, p + q);
    const auto& tuples = out.index_tuples();
    const auto& splits = combinations(p + q, p);
    for (size_t t = 0; t < tuples.size(); ++t) {
        const auto& gamma = tuples[t];
        Poly acc(owner_->base());
        for (const auto& pick : splits) {
            std::vector<size_t> left, right;
            left.reserve(p);
            right.reserve(q);
            size_t pi = 0;
            int inversions = 0;
            for (size_t pos = 0; pos < p + q; ++pos) {
                if (pi < pick.size() && pick[pi] == pos) {
                    left.push_back(gamma[pos]);
                    inversions += static_cast<int>(pos - pi);
                    ++pi;
                } else {
                    right.push_back(gamma[pos]);
                }
            }
            Poly a = component(left);
            if (a.is_zero())
                continue;
            Poly b = o.component(right);
            if (b.is_zero())
                continue;
            Poly term = a * b;
            acc += (inversions % 2 == 0) ? term : -term;
        }
        out.comps_[t] = acc;
    }
    return out;
}

bool TensorForm::operator==(const TensorForm& o) const {
    return *owner_ == *o.owner_ && degree_ == o.degree_ && comps_ == o.comps_;
}

std::string TensorForm::to_string() const {
    if (degree_ == 0)
        return comps_[0].to_string();
    std::string out;
    const auto& tuples = index_tuples();
    for (size_t t = 0; t < tuples.size(); ++t) {
        if (comps_[t].is_zero())
            continue;
        std::string key;
        for (size_t i : tuples[t])
            key += (key.empty() ? "" : ",") + owner_->frame_names()[i];
        if (!out.empty())
            out += "; ";
        out += "(" + key + ") = " + comps_[t].to_string();
    }
    return out.empty() ? "0" : "{ " + out + " }";
}

TensorForm pullback(const ChartMorphism& m, const TensorForm& form) {
    if (!(*form.owner() == *m.target))
        fail(ErrorKind::TargetMismatch, "pullback: form does not live on the morphism target");
    size_t n = form.degree();
    TensorForm out(m.source, n);
    if (n == 0) {
        out.set_component({}, pull_function(m, form.components()[0]));
        return out;
    }
    const auto& src_tuples = out.index_tuples();
    const auto& dst_tuples = form.index_tuples();
    for (size_t s = 0; s < src_tuples.size(); ++s) {
        const auto& alpha = src_tuples[s];
        Poly acc(m.source->base());
        for (size_t t = 0; t < dst_tuples.size(); ++t) {
            if (form.components()[t].is_zero())
                continue;
            const auto& beta = dst_tuples[t];
            Poly det = determinant(n, m.source->base(), [&](size_t i, size_t j) -> const Poly& {
                return m.fiber[beta[i]][alpha[j]];
            });
            if (!det.is_zero())
                acc += pull_function(m, form.components()[t]) * det;
        }
        out.set_component(alpha, acc);
    }
    return out;
}

RFormPtr RLinearForm::tensor(TensorForm form) {
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::Tensor;
    node->owner_ = form.owner();
    node->degree_ = form.degree();
    node->tensor_ = std::move(form);
    return node;
}

RFormPtr RLinearForm::sum(RFormPtr a, RFormPtr b) {
    if (!(*a->owner_ == *b->owner_))
        fail(ErrorKind::AlgebroidMismatch, "sum of forms on different algebroids");
    if (a->degree_ != b->degree_)
        fail(ErrorKind::ArityMismatch, "sum of forms of different degrees");
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::Sum;
    node->owner_ = a->owner_;
    node->degree_ = a->degree_;
    node->a_ = std::move(a);
    node->b_ = std::move(b);
    return node;
}

RFormPtr RLinearForm::scalar_mul(Poly f, RFormPtr a) {
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::ScalarMul;
    node->owner_ = a->owner_;
    node->degree_ = a->degree_;
    node->scalar_ = f.with_space(a->owner_->base());
    node->a_ = std::move(a);
    return node;
}

RFormPtr RLinearForm::wedge(RFormPtr a, RFormPtr b) {
    if (!(*a->owner_ == *b->owner_))
        fail(ErrorKind::AlgebroidMismatch, "wedge of forms on different algebroids");
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::Wedge;
    node->owner_ = a->owner_;
    node->degree_ = a->degree_ + b->degree_;
    node->a_ = std::move(a);
    node->b_ = std::move(b);
    return node;
}

RFormPtr RLinearForm::cube_avg(RFormPtr a, std::vector<std::string> avg_vars) {
    const auto& base = a->owner_->base();
    for (const auto& v : avg_vars) {
        auto idx = base->find(v);
        if (!idx || base->var(*idx).kind != VarKind::Base)
            fail(ErrorKind::BadAverageSet,
                 "average variable '" + v + "' is not an x-type chart variable");
    }
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::CubeAvg;
    node->owner_ = a->owner_;
    node->degree_ = a->degree_;
    node->avg_vars_ = std::move(avg_vars);
    node->a_ = std::move(a);
    return node;
}

RFormPtr RLinearForm::dr(RFormPtr a) {
    if (!a->owner_->is_valid())
        fail(ErrorKind::InvalidAlgebroid,
             "differential of an R-linear form needs a valid Lie algebroid");
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::Dr;
    node->owner_ = a->owner_;
    node->degree_ = a->degree_ + 1;
    node->a_ = std::move(a);
    return node;
}

RFormPtr RLinearForm::simplex_integral(size_t k, RFormPtr a) {
    const auto& tag = a->owner_->prolongation();
    if (!tag || tag->k != k)
        fail(ErrorKind::NotProlongation,
             "simplex integration needs a form on a prolongation TR^" + std::to_string(k) +
                 " x A");
    if (a->degree_ < k)
        fail(ErrorKind::ShapeError, "form degree below the simplex dimension");
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::SimplexInt;
    node->owner_ = tag->inner;
    node->degree_ = a->degree_ - k;
    node->simplex_k_ = k;
    node->a_ = std::move(a);
    return node;
}

RFormPtr RLinearForm::pullback_along(ChartMorphism m, RFormPtr on_target) {
    if (!(*on_target->owner_ == *m.target))
        fail(ErrorKind::TargetMismatch, "pullback: form does not live on the morphism target");
    if (!base_preserving(m))
        fail(ErrorKind::TargetMismatch,
             "R-linear pullback is defined only along base-preserving morphisms");
    auto node = std::shared_ptr<RLinearForm>(new RLinearForm());
    node->kind_ = Kind::Pullback;
    node->owner_ = m.source;
    node->degree_ = on_target->degree_;
    node->morphism_ = std::move(m);
    node->a_ = std::move(on_target);
    return node;
}

Poly RLinearForm::eval(const std::vector<Section>& args) const {
    check_args(owner_, degree_, args);
    switch (kind_) {
    case Kind::Tensor:
        return tensor_->eval(args);
    case Kind::Sum:
        return a_->eval(args) + b_->eval(args);
    case Kind::ScalarMul:
        return scalar_ * a_->eval(args);
    case Kind::Wedge: {
        size_t p = a_->degree_, q = b_->degree_;
        Poly out(owner_->base());
        for (const auto& pick : combinations(p + q, p)) {
            std::vector<Section> left, right;
            left.reserve(p);
            right.reserve(q);
            size_t pi = 0;
            int inversions = 0;
            for (size_t pos = 0; pos < p + q; ++pos) {
                if (pi < pick.size() && pick[pi] == pos) {
                    left.push_back(args[pos]);
                    inversions += static_cast<int>(pos - pi);
                    ++pi;
                } else {
                    right.push_back(args[pos]);
                }
            }
            Poly va = a_->eval(left);
            if (va.is_zero())
                continue;
            Poly vb = b_->eval(right);
            if (vb.is_zero())
                continue;
            Poly term = va * vb;
            out += (inversions % 2 == 0) ? term : -term;
        }
        return out;
    }
    case Kind::CubeAvg:
        return a_->eval(args).integrate_cube(avg_vars_).with_space(owner_->base());
    case Kind::Dr: {
        size_t n1 = degree_;
        Poly out(owner_->base());
        for (size_t i = 0; i < n1; ++i) {
            std::vector<Section> rest;
            rest.reserve(n1 - 1);
            for (size_t a = 0; a < n1; ++a)
                if (a != i)
                    rest.push_back(args[a]);
            Poly term = anchor_apply(args[i], a_->eval(rest));
            if (!term.is_zero())
                out += (i % 2 == 0) ? term : -term;
        }
        for (size_t i = 0; i < n1; ++i) {
            for (size_t j = i + 1; j < n1; ++j) {
                std::vector<Section> rest;
                rest.reserve(n1 - 1);
                rest.push_back(bracket(args[i], args[j]));
                for (size_t a = 0; a < n1; ++a)
                    if (a != i && a != j)
                        rest.push_back(args[a]);
                Poly term = a_->eval(rest);
                if (!term.is_zero())
                    out += ((i + j) % 2 == 0) ? term : -term;
            }
        }
        return out;
    }
    case Kind::SimplexInt: {
        const AlgebroidPtr& pro = a_->owner();
        const auto& tag = pro->prolongation();
        std::vector<Section> lifted;
        lifted.reserve(a_->degree_);
        for (size_t j = 0; j < simplex_k_; ++j)
            lifted.push_back(t_frame_section(pro, j));
        for (const auto& arg : args)
            lifted.push_back(include_section(pro, arg));
        Poly inner = a_->eval(lifted);
        return inner.integrate_simplex(tag->tvars).with_space(owner_->base());
    }
    case Kind::Pullback: {
        std::vector<Section> pushed;
        pushed.reserve(args.size());
        for (const auto& arg : args)
            pushed.push_back(push_section(*morphism_, arg));
        return a_->eval(pushed);
    }
    }
    fail(ErrorKind::ShapeError, "corrupt form node");
}

std::string RLinearForm::to_string() const {
    switch (kind_) {
    case Kind::Tensor:
        return "tensor{" + tensor_->to_string() + "}";
    case Kind::Sum:
        return "sum(" + a_->to_string() + ", " + b_->to_string() + ")";
    case Kind::ScalarMul:
        return "scale(" + scalar_.to_string() + ", " + a_->to_string() + ")";
    case Kind::Wedge:
        return "wedge(" + a_->to_string() + ", " + b_->to_string() + ")";
    case Kind::CubeAvg: {
        std::string vars;
        for (const auto& v : avg_vars_)
            vars += (vars.empty() ? "" : ", ") + v;
        return "avg({" + vars + "}, " + a_->to_string() + ")";
    }
    case Kind::Dr:
        return "dr(" + a_->to_string() + ")";
    case Kind::SimplexInt:
        return "int_simplex(" + std::to_string(simplex_k_) + ", " + a_->to_string() + ")";
    case Kind::Pullback:
        return "pullback(" + a_->to_string() + ")";
    }
    return "?";
}

RFormPtr r_d(const RFormPtr& form) { return RLinearForm::dr(form); }

RFormPtr make_integrated(TensorForm form, std::vector<std::string> avg_vars) {
    return RLinearForm::cube_avg(RLinearForm::tensor(std::move(form)), std::move(avg_vars));
}

} // namespace lad
