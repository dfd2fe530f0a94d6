#include "fsforms/calculus/calculus.hpp"

#include <string>

#include "fsforms/core/error.hpp"

namespace fsforms::calculus {

Theory Theory::yang_mills() {
    Theory th;
    th.connection = th.registry.declare("A", {0, 1}, Valuedness::adjoint);
    th.electric = th.registry.declare("E", {0, 2}, Valuedness::adjoint);
    th.ghost = th.registry.declare("w", {1, 0}, Valuedness::adjoint);
    th.curvature = th.registry.declare("F", {2, 0}, Valuedness::adjoint);
    th.registry.declare("X", {0, 0}, Valuedness::adjoint, true);
    th.registry.declare("Y", {0, 0}, Valuedness::adjoint, true);
    th.registry.declare("b", {0, 0}, Valuedness::group);
    return th;
}

Role Theory::role(const Atom& a) const {
    if (a.kind != Valuedness::adjoint) return Role::other;
    if (a.id == connection.id) return Role::connection;
    if (a.id == electric.id) return Role::electric;
    if (a.id == ghost.id) return Role::ghost;
    if (a.id == curvature.id) return Role::curvature;
    return Role::other;
}

Expression Theory::atom(std::string_view symbol) const {
    auto a = registry.find(symbol);
    if (!a) throw DeclarationError("undeclared generator '" + std::string(symbol) + "'");
    return Expression::atom(*a);
}

namespace {

Expression monomial_expr(Domain domain, WordKind kind, std::vector<Atom> scalars,
                         std::vector<Atom> word) {
    Monomial m;
    m.domain = domain;
    m.kind = kind;
    m.scalars = std::move(scalars);
    m.word = std::move(word);
    return Expression::from_monomial(std::move(m), 1);
}

// Re-applies the trace and integration domain of `m` to a rebuilt product.
Expression rewrap(const Monomial& m, const Expression& local) {
    Expression e = m.kind == WordKind::traced ? trace(local) : local;
    if (m.domain == Domain::none) return e;
    return e.map_terms([&](const Monomial& t) {
        Monomial r = t;
        r.domain = m.domain;
        return Expression::from_monomial(std::move(r), 1);
    });
}

WordKind local_kind(const Monomial& m) {
    return m.kind == WordKind::scalar ? WordKind::scalar : WordKind::open;
}

Expression group_inverse_derivative(const Atom& inv, bool field) {
    Atom g = inv.bare();
    g.kind = Valuedness::group;
    Atom dg = field ? g.with_delta() : g.with_d();
    Expression i = Expression::atom(inv.bare());
    return -mul(mul(i, Expression::atom(dg)), i);
}

}  // namespace

Expression derive(const Expression& e, Bidegree deg,
                  const std::function<Expression(const Atom&)>& rule,
                  bool through_integrals) {
    return e.map_terms([&](const Monomial& m) {
        if (m.domain != Domain::none && !through_integrals)
            throw DegreeError("operator does not commute with integration");
        Expression out;
        const WordKind kind = local_kind(m);
        Bidegree before;
        const std::size_t ns = m.scalars.size();
        for (std::size_t i = 0; i < ns + m.word.size(); ++i) {
            const bool in_scalars = i < ns;
            const Atom& a = in_scalars ? m.scalars[i] : m.word[i - ns];
            Expression image = rule(a);
            if (!image.is_zero()) {
                Expression left, right;
                if (in_scalars) {
                    left = monomial_expr(Domain::none, WordKind::scalar,
                                         {m.scalars.begin(), m.scalars.begin() + i}, {});
                    right = monomial_expr(Domain::none, kind,
                                          {m.scalars.begin() + i + 1, m.scalars.end()}, m.word);
                } else {
                    std::size_t j = i - ns;
                    left = monomial_expr(Domain::none, kind, m.scalars,
                                         {m.word.begin(), m.word.begin() + j});
                    right = monomial_expr(Domain::none, kind, {},
                                          {m.word.begin() + j + 1, m.word.end()});
                }
                Expression term = mul(mul(left, image), right);
                term *= Rational(koszul_sign(deg, before));
                out += rewrap(m, term);
            }
            before = before + a.degree();
        }
        return out;
    });
}

Expression substitute(const Expression& e,
                      const std::function<std::optional<Expression>(const Atom&)>& rule) {
    return e.map_terms([&](const Monomial& m) {
        const WordKind kind = local_kind(m);
        Expression prod = monomial_expr(Domain::none, kind, {}, {});
        for (const auto& a : m.scalars) {
            auto img = rule(a);
            prod = mul(prod, img ? *img : Expression::atom(a));
        }
        for (const auto& a : m.word) {
            auto img = rule(a);
            prod = mul(prod, img ? *img : Expression::atom(a));
        }
        return rewrap(m, prod);
    });
}

Expression delta(const Theory& th, const Expression& e) {
    return derive(e, {1, 0}, [&](const Atom& a) -> Expression {
        if (a.delta) return {};
        if (th.registry.generator(a).field_independent) return {};
        if (a.kind == Valuedness::group_inverse) {
            if (a.d) return delta(th, d(th, Expression::atom(a.bare())));
            return group_inverse_derivative(a, true);
        }
        return Expression::atom(a.with_delta());
    }, true);
}

Expression d(const Theory& th, const Expression& e) {
    return derive(e, {0, 1}, [&](const Atom& a) -> Expression {
        if (a.d) return {};
        if (a.kind == Valuedness::group_inverse) {
            if (a.delta) return d(th, delta(th, Expression::atom(a.bare())));
            return group_inverse_derivative(a, false);
        }
        return Expression::atom(a.with_d());
    }, false);
}

Expression covariant_D(const Theory& th, const Expression& e) {
    if (e.adjoint() == false) throw ValuednessError("D_A of a scalar-valued expression");
    return d(th, e) + bracket(Expression::atom(th.connection), e);
}

Expression curvature(const Theory& th) {
    Expression w = Expression::atom(th.ghost);
    Expression half = bracket(w, w);
    half *= Rational(th.convention == Convention::yangmills ? 1 : -1, 2);
    return Expression::atom(th.ghost.with_delta()) + half;
}

namespace {

// Image of a (possibly differentiated) generator once the opaque curvature
// is replaced by its expansion.
Expression expanded_atom(const Theory& th, const Atom& a) {
    Expression e = curvature(th);
    if (a.delta) e = delta(th, e);
    if (a.d) e = d(th, e);
    return e;
}

Expression brst_rule(const Theory& th, const Atom& a);

// delta_H of a bare generator, used by the tensorial rule on delta-atoms.
Expression horizontal_of(const Theory& th, const Atom& bare) {
    Expression base = Expression::atom(bare);
    return delta(th, base) - brst_rule(th, bare);
}

Expression brst_rule(const Theory& th, const Atom& a) {
    if (th.registry.generator(a).field_independent) return {};
    if (a.kind == Valuedness::scalar) return {};
    if (a.is_group_like())
        throw Error("no vertical rule for group generator '" +
                    th.registry.generator(a).symbol + "'");
    Role role = th.role(a);
    if (role == Role::other)
        throw Error("no vertical rule for generator '" + th.registry.generator(a).symbol + "'");
    const Expression w = Expression::atom(th.ghost);
    if (a.d) {
        Atom b = a;
        b.d = false;
        return d(th, brst_rule(th, b));
    }
    if (role == Role::curvature) {
        if (a.delta) return brst_s(th, expanded_atom(th, a));
        return -bracket(w, Expression::atom(a));
    }
    if (a.delta) {
        // s(delta Y) = -[w, delta_H Y]; delta_H w is the curvature.
        Expression horizontal = role == Role::ghost ? curvature(th) : horizontal_of(th, a.bare());
        return -bracket(w, horizontal);
    }
    switch (role) {
        case Role::connection: return covariant_D(th, w);
        case Role::electric: return -bracket(w, Expression::atom(a));
        case Role::ghost: {
            Expression r = bracket(w, w);
            r *= Rational(-1, 2);
            return r;
        }
        default: return {};
    }
}

}  // namespace

Expression brst_s(const Theory& th, const Expression& e) {
    return derive(e, {1, 0}, [&](const Atom& a) { return brst_rule(th, a); }, true);
}

Expression vertical(const Theory& th, const Expression& e) { return -brst_s(th, e); }

Expression delta_H(const Theory& th, const Expression& e) {
    return delta(th, e) - brst_s(th, e);
}

Expression expand_curvature(const Theory& th, const Expression& e) {
    return substitute(e, [&](const Atom& a) -> std::optional<Expression> {
        if (th.role(a) != Role::curvature) return std::nullopt;
        return expanded_atom(th, a);
    });
}

Expression flat_reduce(const Theory& th, const Expression& e) {
    Expression w = Expression::atom(th.ghost);
    Expression mc = bracket(w, w);
    mc *= Rational(th.convention == Convention::yangmills ? -1 : 1, 2);
    return substitute(e, [&](const Atom& a) -> std::optional<Expression> {
        Role r = th.role(a);
        if (r == Role::curvature) return Expression{};
        if (r == Role::ghost && a.delta) return a.d ? d(th, mc) : mc;
        return std::nullopt;
    });
}

Expression gauge_substitute(const Theory& th, const Atom& group, const Expression& e) {
    if (group.kind != Valuedness::group)
        throw DeclarationError("'" + th.registry.generator(group).symbol +
                               "' is not a declared group generator");
    const Expression g = Expression::atom(group.bare());
    const Expression gi = Expression::atom(th.registry.inverse(group));
    auto ad = [&](const Expression& x) { return mul(mul(g, x), gi); };
    auto image = [&](Role r, const Atom& bare) -> Expression {
        switch (r) {
            case Role::connection:
                return ad(Expression::atom(bare)) - mul(Expression::atom(group.with_d()), gi);
            case Role::ghost:
                return ad(Expression::atom(bare)) - mul(Expression::atom(group.with_delta()), gi);
            default: return ad(Expression::atom(bare));
        }
    };
    return substitute(e, [&](const Atom& a) -> std::optional<Expression> {
        Role r = th.role(a);
        if (r == Role::other) return std::nullopt;
        Expression img = image(r, a.bare());
        if (a.delta) img = delta(th, img);
        if (a.d) img = d(th, img);
        return img;
    });
}

Expression delta_group(const Theory& th, const Expression& e) {
    return derive(e, {1, 0}, [&](const Atom& a) -> Expression {
        if (a.delta) return {};
        if (a.kind == Valuedness::group) return Expression::atom(a.with_delta());
        if (a.kind == Valuedness::group_inverse) {
            if (a.d) return delta_group(th, group_inverse_derivative(a.bare(), false));
            return group_inverse_derivative(a, true);
        }
        return {};
    }, true);
}

Expression onshell_reduce(const Theory& th, const Expression& e) {
    const Expression A = Expression::atom(th.connection);
    const Expression E = Expression::atom(th.electric);
    const Expression gauss = -bracket(A, E);
    return substitute(e, [&](const Atom& a) -> std::optional<Expression> {
        if (th.role(a) != Role::electric || !a.d) return std::nullopt;
        return a.delta ? delta(th, gauss) : gauss;
    });
}

namespace {

Expression integrated(const Expression& local, Domain domain) {
    return local.map_terms([&](const Monomial& m) {
        Monomial r = m;
        r.domain = domain;
        return Expression::from_monomial(std::move(r), 1);
    });
}

bool try_primitive(const Theory& th, Expression& e, const Monomial& m, Rational c) {
    Monomial local = m;
    local.domain = Domain::none;
    const std::size_t ns = local.scalars.size();
    for (std::size_t i = 0; i < ns + local.word.size(); ++i) {
        Atom& a = i < ns ? local.scalars[i] : local.word[i - ns];
        if (!a.d) continue;
        Monomial prim = local;
        (i < ns ? prim.scalars[i] : prim.word[i - ns]).d = false;
        Expression p = Expression::from_monomial(prim, 1);
        if (p.is_zero()) continue;
        Expression dp = d(th, p);
        auto it = dp.terms().find(local);
        if (it == dp.terms().end()) continue;
        Rational k = c / it->second;
        bool present = true;
        for (const auto& [t, tc] : dp.terms()) {
            Monomial ti = t;
            ti.domain = Domain::slice;
            if (!e.terms().contains(ti)) {
                present = false;
                break;
            }
        }
        if (!present) continue;
        dp *= k;
        p *= k;
        e -= integrated(dp, Domain::slice);
        e += integrated(p, Domain::corner);
        return true;
    }
    return false;
}

}  // namespace

Expression stokes(const Theory& th, const Expression& e) {
    Expression out = e;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [m, c] : out.terms()) {
            if (m.domain != Domain::slice) continue;
            Expression trial = out;
            if (try_primitive(th, trial, m, c)) {
                out = std::move(trial);
                changed = true;
                break;
            }
        }
    }
    return out;
}

Expression to_bulk(const Theory& th, const Expression& e) {
    return e.map_terms([&](const Monomial& m) {
        if (m.domain != Domain::corner) return Expression::from_monomial(m, 1);
        Monomial local = m;
        local.domain = Domain::none;
        return integrated(d(th, Expression::from_monomial(local, 1)), Domain::slice);
    });
}

Expression contract_fundamental(const Theory& th, const Atom& param, const Expression& e) {
    const auto& gen = th.registry.generator(param);
    if (param.kind != Valuedness::adjoint || param.base != Bidegree{0, 0} ||
        !gen.field_independent || param.delta || param.d)
        throw DeclarationError("'" + gen.symbol +
                               "' is not a field-independent (0,0) gauge parameter");
    if (auto deg = e.degree(); deg && deg->f == 0)
        throw DegreeError("contraction of a field-space 0-form");
    const Expression X = Expression::atom(param);
    std::function<Expression(const Atom&)> rule = [&](const Atom& a) -> Expression {
        if (a.degree().f == 0) return {};
        if (a.d) {
            Atom b = a;
            b.d = false;
            return d(th, rule(b));
        }
        switch (th.role(a)) {
            case Role::ghost:
                return a.delta ? -bracket(X, Expression::atom(a.bare())) : X;
            case Role::connection: return covariant_D(th, X);
            case Role::electric: return -bracket(X, Expression::atom(a.bare()));
            case Role::curvature:
                if (!a.delta) return {};
                return contract_fundamental(th, param, expanded_atom(th, a));
            default:
                throw Error("no contraction rule for generator '" +
                            th.registry.generator(a).symbol + "'");
        }
    };
    return derive(e, {-1, 0}, rule, true);
}

}  // namespace fsforms::calculus
