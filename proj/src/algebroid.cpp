#include "lad/algebroid.hpp"

#include "lad/errors.hpp"

#include <algorithm>
#include <set>

namespace lad {

namespace {

// rho(f) acting on p, with f a coefficient vector over A's frame.
Poly derivation_apply(const ChartAlgebroid& a, const std::vector<Poly>& f, const Poly& p) {
    Poly out(a.base());
    const auto& anchor = a.anchor();
    for (size_t alpha = 0; alpha < a.rank(); ++alpha) {
        if (f[alpha].is_zero())
            continue;
        for (size_t j = 0; j < a.base_dim(); ++j) {
            if (anchor[alpha][j].is_zero())
                continue;
            out += f[alpha] * anchor[alpha][j] * p.partial(a.base()->var(j).name);
        }
    }
    return out;
}

std::vector<Poly> bracket_coeffs(const ChartAlgebroid& a, const std::vector<Poly>& f,
                                 const std::vector<Poly>& g) {
    std::vector<Poly> out(a.rank(), Poly(a.base()));
    for (const auto& [pair, c] : a.structure()) {
        auto [alpha, beta] = pair;
        Poly factor = f[alpha] * g[beta] - f[beta] * g[alpha];
        if (factor.is_zero())
            continue;
        for (size_t gamma = 0; gamma < a.rank(); ++gamma) {
            if (!c[gamma].is_zero())
                out[gamma] += factor * c[gamma];
        }
    }
    for (size_t gamma = 0; gamma < a.rank(); ++gamma) {
        out[gamma] += derivation_apply(a, f, g[gamma]);
        out[gamma] -= derivation_apply(a, g, f[gamma]);
    }
    return out;
}

std::string coeffs_to_string(const std::vector<Poly>& coeff,
                             const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < coeff.size(); ++i) {
        if (coeff[i].is_zero())
            continue;
        if (!out.empty())
            out += " + ";
        out += "(" + coeff[i].to_string() + ")*" + names[i];
    }
    return out.empty() ? "0" : out;
}

} // namespace

std::string Violation::to_string() const {
    std::string where;
    for (size_t i = 0; i < indices.size(); ++i)
        where += (i ? "," : "") + std::to_string(indices[i]);
    const char* what = "";
    switch (type) {
    case Type::AnchorCompat: what = "anchor compatibility"; break;
    case Type::Jacobi: what = "Jacobi identity"; break;
    case Type::MorphismAnchor: what = "morphism anchor condition"; break;
    case Type::MorphismBracket: what = "morphism bracket condition"; break;
    }
    return std::string(what) + " violated at (" + where + "): residual " + detail;
}

std::string ValidationReport::to_string() const {
    if (ok())
        return "valid";
    std::string out;
    for (const auto& v : violations)
        out += v.to_string() + "\n";
    return out;
}

AlgebroidPtr ChartAlgebroid::make(std::string name, VarSpacePtr base,
                                  std::vector<std::string> frame_names,
                                  std::vector<std::vector<Poly>> anchor,
                                  StructureMap structure,
                                  std::optional<ProlongationTag> tag) {
    size_t r = frame_names.size();
    size_t m = base->size();
    {
        std::set<std::string> seen(frame_names.begin(), frame_names.end());
        if (seen.size() != r)
            fail(ErrorKind::VarClash, "duplicate frame element name");
    }
    if (anchor.size() != r)
        fail(ErrorKind::ShapeError, "anchor must have one row per frame element");
    for (auto& row : anchor) {
        if (row.size() != m)
            fail(ErrorKind::ShapeError, "anchor row length must match base dimension");
        for (auto& p : row)
            p = p.with_space(base);
    }
    for (auto& [pair, c] : structure) {
        if (pair.first >= pair.second || pair.second >= r)
            fail(ErrorKind::ShapeError, "structure functions must be indexed alpha < beta < rank");
        if (c.size() != r)
            fail(ErrorKind::ShapeError, "structure coefficient vector length must equal rank");
        for (auto& p : c)
            p = p.with_space(base);
    }

    auto a = std::shared_ptr<ChartAlgebroid>(new ChartAlgebroid());
    a->name_ = std::move(name);
    a->base_ = std::move(base);
    a->frame_names_ = std::move(frame_names);
    a->anchor_ = std::move(anchor);
    a->structure_ = std::move(structure);
    a->tag_ = std::move(tag);
    a->report_ = a->compute_validation();
    return a;
}

AlgebroidPtr ChartAlgebroid::tangent(const std::vector<std::string>& base_vars,
                                     VarKind kind, std::string name) {
    std::vector<Var> vars;
    for (const auto& v : base_vars)
        vars.push_back({v, kind});
    VarSpacePtr base = VarSpace::make(vars);
    size_t m = base->size();
    std::vector<std::string> frames;
    std::vector<std::vector<Poly>> anchor(m, std::vector<Poly>(m, Poly(base)));
    for (size_t i = 0; i < m; ++i) {
        frames.push_back("d" + base->var(i).name);
        anchor[i][i] = Poly::constant(base, Rat(1));
    }
    if (name.empty())
        name = "TR^" + std::to_string(m);
    return make(std::move(name), base, std::move(frames), std::move(anchor), {});
}

AlgebroidPtr ChartAlgebroid::point(std::string name, std::vector<std::string> frame_names,
                                   const std::map<std::pair<size_t, size_t>, std::vector<Rat>>& structure) {
    VarSpacePtr base = VarSpace::empty();
    StructureMap s;
    for (const auto& [pair, c] : structure) {
        std::vector<Poly> row;
        for (const auto& r : c)
            row.push_back(Poly::constant(base, r));
        s.emplace(pair, std::move(row));
    }
    size_t r = frame_names.size();
    return make(std::move(name), base, std::move(frame_names),
                std::vector<std::vector<Poly>>(r), std::move(s));
}

size_t ChartAlgebroid::frame_index(const std::string& name) const {
    for (size_t i = 0; i < frame_names_.size(); ++i)
        if (frame_names_[i] == name)
            return i;
    fail(ErrorKind::UnknownVariable, "unknown frame element '" + name + "'");
}

Poly ChartAlgebroid::structure_fn(size_t gamma, size_t alpha, size_t beta) const {
    if (alpha == beta)
        return Poly(base_);
    bool flip = alpha > beta;
    if (flip)
        std::swap(alpha, beta);
    auto it = structure_.find({alpha, beta});
    if (it == structure_.end())
        return Poly(base_);
    return flip ? -it->second[gamma] : it->second[gamma];
}

std::vector<Poly> ChartAlgebroid::frame_bracket(size_t alpha, size_t beta) const {
    std::vector<Poly> out;
    out.reserve(rank());
    for (size_t gamma = 0; gamma < rank(); ++gamma)
        out.push_back(structure_fn(gamma, alpha, beta));
    return out;
}

Poly ChartAlgebroid::frame_anchor_apply(size_t alpha, const Poly& p) const {
    Poly q = p.with_space(base_);
    Poly out(base_);
    for (size_t j = 0; j < base_dim(); ++j) {
        if (!anchor_[alpha][j].is_zero())
            out += anchor_[alpha][j] * q.partial(base_->var(j).name);
    }
    return out;
}

ValidationReport ChartAlgebroid::compute_validation() const {
    ValidationReport report;
    size_t r = rank();
    // Anchor compatibility: rho([e_a, e_b]) = [rho(e_a), rho(e_b)].
    for (size_t alpha = 0; alpha < r; ++alpha) {
        for (size_t beta = alpha + 1; beta < r; ++beta) {
            for (size_t j = 0; j < base_dim(); ++j) {
                Poly lhs(base_);
                for (size_t gamma = 0; gamma < r; ++gamma)
                    lhs += structure_fn(gamma, alpha, beta) * anchor_[gamma][j];
                Poly rhs = frame_anchor_apply(alpha, anchor_[beta][j]) -
                           frame_anchor_apply(beta, anchor_[alpha][j]);
                Poly res = lhs - rhs;
                if (!res.is_zero()) {
                    report.violations.push_back({Violation::Type::AnchorCompat,
                                                 {alpha + 1, beta + 1, j + 1},
                                                 res.to_string()});
                }
            }
        }
    }
    // Frame-level Jacobi; the Leibniz extension makes this sufficient once
    // anchor compatibility holds.
    for (size_t alpha = 0; alpha < r; ++alpha) {
        for (size_t beta = alpha + 1; beta < r; ++beta) {
            for (size_t gamma = beta + 1; gamma < r; ++gamma) {
                auto unit = [&](size_t i) {
                    std::vector<Poly> f(r, Poly(base_));
                    f[i] = Poly::constant(base_, Rat(1));
                    return f;
                };
                auto cyc = [&](size_t i, size_t j, size_t k) {
                    return bracket_coeffs(*this, unit(i), bracket_coeffs(*this, unit(j), unit(k)));
                };
                std::vector<Poly> res = cyc(alpha, beta, gamma);
                std::vector<Poly> t2 = cyc(beta, gamma, alpha);
                std::vector<Poly> t3 = cyc(gamma, alpha, beta);
                bool zero = true;
                for (size_t i = 0; i < r; ++i) {
                    res[i] += t2[i];
                    res[i] += t3[i];
                    zero = zero && res[i].is_zero();
                }
                if (!zero) {
                    report.violations.push_back({Violation::Type::Jacobi,
                                                 {alpha + 1, beta + 1, gamma + 1},
                                                 coeffs_to_string(res, frame_names_)});
                }
            }
        }
    }
    return report;
}

bool ChartAlgebroid::operator==(const ChartAlgebroid& o) const {
    if (this == &o)
        return true;
    if (!(*base_ == *o.base_) || frame_names_ != o.frame_names_ || anchor_ != o.anchor_ ||
        structure_ != o.structure_)
        return false;
    if (tag_.has_value() != o.tag_.has_value())
        return false;
    if (tag_) {
        if (tag_->k != o.tag_->k || tag_->tvars != o.tag_->tvars)
            return false;
        if (!(*tag_->inner == *o.tag_->inner))
            return false;
    }
    return true;
}

Section make_section(AlgebroidPtr owner, std::vector<Poly> coeff) {
    if (coeff.size() != owner->rank())
        fail(ErrorKind::ShapeError, "section needs one coefficient per frame element");
    for (auto& p : coeff)
        p = p.with_space(owner->base());
    return {std::move(owner), std::move(coeff)};
}

Section zero_section(AlgebroidPtr owner) {
    std::vector<Poly> coeff(owner->rank(), Poly(owner->base()));
    return {std::move(owner), std::move(coeff)};
}

Section frame_section(AlgebroidPtr owner, size_t alpha) {
    Section s = zero_section(owner);
    s.coeff[alpha] = Poly::constant(owner->base(), Rat(1));
    s.owner = std::move(owner);
    return s;
}

bool same_owner(const Section& a, const Section& b) {
    return a.owner == b.owner || *a.owner == *b.owner;
}

Section add(const Section& a, const Section& b) {
    if (!same_owner(a, b))
        fail(ErrorKind::AlgebroidMismatch, "sections of different algebroids");
    Section out = a;
    for (size_t i = 0; i < out.coeff.size(); ++i)
        out.coeff[i] += b.coeff[i];
    return out;
}

Section subtract(const Section& a, const Section& b) {
    if (!same_owner(a, b))
        fail(ErrorKind::AlgebroidMismatch, "sections of different algebroids");
    Section out = a;
    for (size_t i = 0; i < out.coeff.size(); ++i)
        out.coeff[i] -= b.coeff[i];
    return out;
}

Section scale(const Section& a, const Poly& f) {
    Section out = a;
    Poly g = f.with_space(a.owner->base());
    for (auto& c : out.coeff)
        c = c * g;
    return out;
}

bool is_zero(const Section& a) {
    return std::all_of(a.coeff.begin(), a.coeff.end(), [](const Poly& p) { return p.is_zero(); });
}

std::string section_to_string(const Section& a) {
    return coeffs_to_string(a.coeff, a.owner->frame_names());
}

Section bracket(const Section& a, const Section& b) {
    if (!same_owner(a, b))
        fail(ErrorKind::AlgebroidMismatch, "bracket of sections of different algebroids");
    return {a.owner, bracket_coeffs(*a.owner, a.coeff, b.coeff)};
}

Poly anchor_apply(const Section& a, const Poly& p) {
    return derivation_apply(*a.owner, a.coeff, p.with_space(a.owner->base()));
}

bool ChartMorphism::operator==(const ChartMorphism& o) const {
    return *source == *o.source && *target == *o.target && base_map == o.base_map &&
           fiber == o.fiber;
}

ChartMorphism identity_morphism(const AlgebroidPtr& a) {
    ChartMorphism m;
    m.source = a;
    m.target = a;
    for (size_t j = 0; j < a->base_dim(); ++j)
        m.base_map.push_back(Poly::variable(a->base(), a->base()->var(j).name));
    m.fiber.assign(a->rank(), std::vector<Poly>(a->rank(), Poly(a->base())));
    for (size_t i = 0; i < a->rank(); ++i)
        m.fiber[i][i] = Poly::constant(a->base(), Rat(1));
    return m;
}

Poly pull_function(const ChartMorphism& m, const Poly& p) {
    Poly q = p.with_space(m.target->base());
    std::map<std::string, Poly> subst;
    for (size_t j = 0; j < m.target->base_dim(); ++j)
        subst.emplace(m.target->base()->var(j).name, m.base_map[j].with_space(m.source->base()));
    if (m.target->base_dim() == 0)
        return q.with_space(m.source->base());
    return q.compose(subst).with_space(m.source->base());
}

ChartMorphism compose_morphisms(const ChartMorphism& phi, const ChartMorphism& psi) {
    if (!(*psi.target == *phi.source))
        fail(ErrorKind::ChainMismatch, "morphism composition: inner target differs from outer source");
    ChartMorphism out;
    out.source = psi.source;
    out.target = phi.target;
    for (size_t j = 0; j < phi.target->base_dim(); ++j)
        out.base_map.push_back(pull_function(psi, phi.base_map[j]));
    size_t rc = phi.target->rank(), rb = phi.source->rank(), ra = psi.source->rank();
    out.fiber.assign(rc, std::vector<Poly>(ra, Poly(psi.source->base())));
    for (size_t c = 0; c < rc; ++c) {
        for (size_t a = 0; a < ra; ++a) {
            Poly acc(psi.source->base());
            for (size_t b = 0; b < rb; ++b) {
                if (!phi.fiber[c][b].is_zero() && !psi.fiber[b][a].is_zero())
                    acc += pull_function(psi, phi.fiber[c][b]) * psi.fiber[b][a];
            }
            out.fiber[c][a] = acc;
        }
    }
    return out;
}

ValidationReport validate_morphism(const ChartMorphism& m) {
    const ChartAlgebroid& A = *m.source;
    const ChartAlgebroid& B = *m.target;
    if (m.base_map.size() != B.base_dim())
        fail(ErrorKind::ShapeError, "base map needs one entry per target base variable");
    if (m.fiber.size() != B.rank())
        fail(ErrorKind::ShapeError, "fiber matrix needs rank(target) rows");
    for (const auto& row : m.fiber)
        if (row.size() != A.rank())
            fail(ErrorKind::ShapeError, "fiber matrix needs rank(source) columns");

    ValidationReport report;
    // Anchor condition: dF o rho_A = rho_B o Phi, per frame element and
    // target coordinate.
    for (size_t alpha = 0; alpha < A.rank(); ++alpha) {
        for (size_t j = 0; j < B.base_dim(); ++j) {
            Poly lhs(A.base());
            for (size_t beta = 0; beta < B.rank(); ++beta) {
                if (!m.fiber[beta][alpha].is_zero() && !B.anchor()[beta][j].is_zero())
                    lhs += m.fiber[beta][alpha] * pull_function(m, B.anchor()[beta][j]);
            }
            Poly rhs = A.frame_anchor_apply(alpha, m.base_map[j].with_space(A.base()));
            Poly res = lhs - rhs;
            if (!res.is_zero())
                report.violations.push_back({Violation::Type::MorphismAnchor,
                                             {alpha + 1, j + 1},
                                             res.to_string()});
        }
    }
    // Bracket condition on frames, with the canonical global decomposition
    // Phi(e_alpha) = sum_beta fiber[beta][alpha] (eps_beta o F).
    for (size_t alpha = 0; alpha < A.rank(); ++alpha) {
        for (size_t beta = alpha + 1; beta < A.rank(); ++beta) {
            for (size_t delta = 0; delta < B.rank(); ++delta) {
                Poly lhs(A.base());
                for (size_t gamma = 0; gamma < A.rank(); ++gamma) {
                    Poly c = A.structure_fn(gamma, alpha, beta);
                    if (!c.is_zero())
                        lhs += c * m.fiber[delta][gamma];
                }
                Poly rhs(A.base());
                for (const auto& [pair, cvec] : B.structure()) {
                    auto [kappa, lambda] = pair;
                    if (cvec[delta].is_zero())
                        continue;
                    Poly factor = m.fiber[kappa][alpha] * m.fiber[lambda][beta] -
                                  m.fiber[lambda][alpha] * m.fiber[kappa][beta];
                    if (!factor.is_zero())
                        rhs += factor * pull_function(m, cvec[delta]);
                }
                rhs += A.frame_anchor_apply(alpha, m.fiber[delta][beta]);
                rhs -= A.frame_anchor_apply(beta, m.fiber[delta][alpha]);
                Poly res = lhs - rhs;
                if (!res.is_zero())
                    report.violations.push_back({Violation::Type::MorphismBracket,
                                                 {alpha + 1, beta + 1, delta + 1},
                                                 res.to_string()});
            }
        }
    }
    return report;
}

bool base_preserving(const ChartMorphism& m) {
    if (!(*m.source->base() == *m.target->base()))
        return false;
    for (size_t j = 0; j < m.target->base_dim(); ++j) {
        if (m.base_map[j] != Poly::variable(m.source->base(), m.target->base()->var(j).name))
            return false;
    }
    return true;
}

Section push_section(const ChartMorphism& m, const Section& a) {
    if (!(*a.owner == *m.source))
        fail(ErrorKind::AlgebroidMismatch, "section does not belong to the morphism source");
    if (!base_preserving(m))
        fail(ErrorKind::TargetMismatch, "push_section requires a base-preserving morphism");
    std::vector<Poly> out(m.target->rank(), Poly(m.target->base()));
    for (size_t beta = 0; beta < m.target->rank(); ++beta) {
        for (size_t alpha = 0; alpha < a.coeff.size(); ++alpha) {
            if (!m.fiber[beta][alpha].is_zero() && !a.coeff[alpha].is_zero())
                out[beta] += m.fiber[beta][alpha] * a.coeff[alpha];
        }
    }
    return make_section(m.target, std::move(out));
}

AlgebroidPtr product(const AlgebroidPtr& a, const AlgebroidPtr& b) {
    for (size_t i = 0; i < a->base_dim(); ++i)
        if (b->base()->contains(a->base()->var(i).name))
            fail(ErrorKind::VarClash,
                 "product factors share base variable '" + a->base()->var(i).name + "'");
    for (const auto& f : a->frame_names())
        if (std::find(b->frame_names().begin(), b->frame_names().end(), f) !=
            b->frame_names().end())
            fail(ErrorKind::VarClash, "product factors share frame element '" + f + "'");

    VarSpacePtr base = VarSpace::merge(*a->base(), *b->base());
    std::vector<std::string> frames = a->frame_names();
    frames.insert(frames.end(), b->frame_names().begin(), b->frame_names().end());

    size_t ra = a->rank(), rb = b->rank(), m = base->size();
    std::vector<std::vector<Poly>> anchor(ra + rb, std::vector<Poly>(m, Poly(base)));
    auto fill_anchor = [&](const AlgebroidPtr& src, size_t row_off) {
        for (size_t alpha = 0; alpha < src->rank(); ++alpha) {
            for (size_t j = 0; j < src->base_dim(); ++j) {
                size_t col = *base->find(src->base()->var(j).name);
                anchor[row_off + alpha][col] = src->anchor()[alpha][j].with_space(base);
            }
        }
    };
    fill_anchor(a, 0);
    fill_anchor(b, ra);

    ChartAlgebroid::StructureMap structure;
    auto fill_structure = [&](const AlgebroidPtr& src, size_t off) {
        for (const auto& [pair, c] : src->structure()) {
            std::vector<Poly> row(ra + rb, Poly(base));
            for (size_t gamma = 0; gamma < src->rank(); ++gamma)
                row[off + gamma] = c[gamma].with_space(base);
            structure.emplace(std::make_pair(pair.first + off, pair.second + off),
                              std::move(row));
        }
    };
    fill_structure(a, 0);
    fill_structure(b, ra);

    return ChartAlgebroid::make(a->name() + " x " + b->name(), base, std::move(frames),
                                std::move(anchor), std::move(structure));
}

AlgebroidPtr prolong(size_t k, const AlgebroidPtr& a) {
    if (k < 1)
        fail(ErrorKind::ShapeError, "prolongation order must be at least 1");
    // Fresh simplex variable names that avoid both the base chart and the
    // frame of A.
    const char* prefixes[] = {"t", "s", "u", "v", "w"};
    std::vector<std::string> tvars;
    std::string picked;
    for (std::string prefix : prefixes) {
        bool ok = true;
        std::vector<std::string> names;
        for (size_t i = 1; i <= k; ++i) {
            std::string n = prefix + std::to_string(i);
            if (a->base()->contains(n) ||
                std::find(a->frame_names().begin(), a->frame_names().end(), "d" + n) !=
                    a->frame_names().end()) {
                ok = false;
                break;
            }
            names.push_back(n);
        }
        if (ok) {
            tvars = std::move(names);
            break;
        }
    }
    if (tvars.empty())
        fail(ErrorKind::VarClash, "could not pick fresh simplex variable names");

    AlgebroidPtr tk = ChartAlgebroid::tangent(tvars, VarKind::Simplex,
                                              "TR^" + std::to_string(k));
    AlgebroidPtr prod = product(tk, a);
    ProlongationTag tag{k, a, tvars};
    return ChartAlgebroid::make("TR^" + std::to_string(k) + " x " + a->name(), prod->base(),
                                prod->frame_names(), prod->anchor(), prod->structure(),
                                std::move(tag));
}

AlgebroidPtr rename(const AlgebroidPtr& a, const std::map<std::string, std::string>& var_renames,
                    const std::map<std::string, std::string>& frame_renames) {
    std::vector<Var> vars;
    for (const Var& v : a->base()->vars()) {
        auto it = var_renames.find(v.name);
        vars.push_back({it == var_renames.end() ? v.name : it->second, v.kind});
    }
    VarSpacePtr base = VarSpace::make(vars);

    std::map<std::string, Poly> subst;
    for (const Var& v : a->base()->vars()) {
        auto it = var_renames.find(v.name);
        subst.emplace(v.name, Poly::variable(base, it == var_renames.end() ? v.name : it->second));
    }
    auto rn = [&](const Poly& p) {
        return a->base_dim() == 0 ? p.with_space(base) : p.compose(subst).with_space(base);
    };

    std::vector<std::string> frames;
    for (const auto& f : a->frame_names()) {
        auto it = frame_renames.find(f);
        frames.push_back(it == frame_renames.end() ? f : it->second);
    }

    size_t m = base->size();
    std::vector<std::vector<Poly>> anchor(a->rank(), std::vector<Poly>(m, Poly(base)));
    for (size_t alpha = 0; alpha < a->rank(); ++alpha) {
        for (size_t j = 0; j < a->base_dim(); ++j) {
            const std::string& old = a->base()->var(j).name;
            auto it = var_renames.find(old);
            size_t col = *base->find(it == var_renames.end() ? old : it->second);
            anchor[alpha][col] = rn(a->anchor()[alpha][j]);
        }
    }
    ChartAlgebroid::StructureMap structure;
    for (const auto& [pair, c] : a->structure()) {
        std::vector<Poly> row;
        for (const auto& p : c)
            row.push_back(rn(p));
        structure.emplace(pair, std::move(row));
    }
    // A rename that touches the simplex chart would stale the tag; keep it
    // only when untouched.
    std::optional<ProlongationTag> tag = a->prolongation();
    if (tag) {
        for (const auto& t : tag->tvars) {
            if (var_renames.count(t)) {
                tag.reset();
                break;
            }
        }
    }
    return ChartAlgebroid::make(a->name(), base, std::move(frames), std::move(anchor),
                                std::move(structure), std::move(tag));
}

Section t_frame_section(const AlgebroidPtr& prolonged, size_t j) {
    const auto& tag = prolonged->prolongation();
    if (!tag)
        fail(ErrorKind::NotProlongation, "algebroid is not a prolongation");
    if (j >= tag->k)
        fail(ErrorKind::ShapeError, "t-frame index out of range");
    return frame_section(prolonged, prolonged->frame_index("d" + tag->tvars[j]));
}

Section include_section(const AlgebroidPtr& prolonged, const Section& a) {
    const auto& tag = prolonged->prolongation();
    if (!tag)
        fail(ErrorKind::NotProlongation, "algebroid is not a prolongation");
    if (!(*a.owner == *tag->inner))
        fail(ErrorKind::AlgebroidMismatch, "section does not belong to the inner factor");
    std::vector<Poly> coeff(prolonged->rank(), Poly(prolonged->base()));
    for (size_t alpha = 0; alpha < a.coeff.size(); ++alpha) {
        size_t at = prolonged->frame_index(a.owner->frame_names()[alpha]);
        coeff[at] = a.coeff[alpha].with_space(prolonged->base());
    }
    return {prolonged, std::move(coeff)};
}

bool PsiReport::ok() const {
    auto all_zero = [](const std::vector<Poly>& v) {
        return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
    };
    return all_zero(vector_field_diff) && all_zero(fiber_diff);
}

std::string PsiReport::to_string() const {
    if (ok())
        return "0";
    std::string out = "vector field part: [";
    for (size_t i = 0; i < vector_field_diff.size(); ++i)
        out += (i ? ", " : "") + vector_field_diff[i].to_string();
    out += "], fiber part: [";
    for (size_t i = 0; i < fiber_diff.size(); ++i)
        out += (i ? ", " : "") + fiber_diff[i].to_string();
    return out + "]";
}

PsiReport psi_check(const Section& a, const Section& b) {
    if (!same_owner(a, b))
        fail(ErrorKind::AlgebroidMismatch, "sections of different algebroids");
    const AlgebroidPtr& P = a.owner;
    const auto& tag = P->prolongation();
    if (!tag)
        fail(ErrorKind::NotProlongation, "psi_check needs a prolongation TR^k x A");
    const AlgebroidPtr& inner = tag->inner;
    size_t k = tag->k;
    size_t r0 = inner->rank();
    const VarSpacePtr& base = P->base();

    // Psi sends (u, w) to the vector field u + rho_A(w) on R^k x M plus the
    // pullback-bundle part w with its canonical frame decomposition.
    auto vector_field_of = [&](const Section& s) {
        std::vector<Poly> X(base->size(), Poly(base));
        for (size_t j = 0; j < k; ++j) {
            size_t col = *base->find(tag->tvars[j]);
            X[col] = s.coeff[P->frame_index("d" + tag->tvars[j])];
        }
        for (size_t p = 0; p < r0; ++p) {
            size_t at = P->frame_index(inner->frame_names()[p]);
            if (s.coeff[at].is_zero())
                continue;
            for (size_t j = 0; j < inner->base_dim(); ++j) {
                size_t col = *base->find(inner->base()->var(j).name);
                X[col] += s.coeff[at] * inner->anchor()[p][j].with_space(base);
            }
        }
        return X;
    };
    auto apply = [&](const std::vector<Poly>& X, const Poly& p) {
        Poly out(base);
        for (size_t j = 0; j < base->size(); ++j)
            if (!X[j].is_zero())
                out += X[j] * p.partial(base->var(j).name);
        return out;
    };

    std::vector<Poly> Xa = vector_field_of(a);
    std::vector<Poly> Xb = vector_field_of(b);

    // First component of the Theorem-1 bracket: the commutator [X, Y].
    std::vector<Poly> commutator(base->size(), Poly(base));
    for (size_t j = 0; j < base->size(); ++j)
        commutator[j] = apply(Xa, Xb[j]) - apply(Xb, Xa[j]);

    // Second component from the decompositions over the frame of A.
    std::vector<Poly> fa(r0, Poly(base)), fb(r0, Poly(base));
    for (size_t p = 0; p < r0; ++p) {
        size_t at = P->frame_index(inner->frame_names()[p]);
        fa[p] = a.coeff[at];
        fb[p] = b.coeff[at];
    }
    std::vector<Poly> second(r0, Poly(base));
    for (size_t p = 0; p < r0; ++p) {
        for (size_t q = 0; q < r0; ++q) {
            if (p == q)
                continue;
            Poly factor = fa[p] * fb[q];
            if (factor.is_zero())
                continue;
            for (size_t gamma = 0; gamma < r0; ++gamma) {
                Poly c = inner->structure_fn(gamma, p, q);
                if (!c.is_zero())
                    second[gamma] += factor * c.with_space(base);
            }
        }
    }
    for (size_t gamma = 0; gamma < r0; ++gamma)
        second[gamma] += apply(Xa, fb[gamma]) - apply(Xb, fa[gamma]);

    // Image of the product bracket under Psi.
    Section br = bracket(a, b);
    std::vector<Poly> Xbr = vector_field_of(br);

    PsiReport report;
    report.vector_field_diff.reserve(base->size());
    for (size_t j = 0; j < base->size(); ++j)
        report.vector_field_diff.push_back(Xbr[j] - commutator[j]);
    report.fiber_diff.reserve(r0);
    for (size_t gamma = 0; gamma < r0; ++gamma) {
        size_t at = P->frame_index(inner->frame_names()[gamma]);
        report.fiber_diff.push_back(br.coeff[at] - second[gamma]);
    }
    return report;
}

} // namespace lad
