#pragma once

#include <functional>
#include <optional>

#include "fsforms/core/atom.hpp"
#include "fsforms/core/expression.hpp"

namespace fsforms::calculus {

/// Sign in front of the commutator in the field-space curvature. Only the
/// Yang-Mills sign is exercised by the identity suites.
enum class Convention { yangmills, diffeo };

enum class Role { connection, electric, ghost, curvature, other };

/// A generator table together with the roles the rewrite rules refer to.
/// Standard content: A (0,1), E (0,2), w (1,0), F (2,0, opaque curvature),
/// field-independent gauge parameters X, Y (0,0) and a group generator b.
struct Theory {
    Registry registry;
    Atom connection;
    Atom electric;
    Atom ghost;
    Atom curvature;
    Convention convention = Convention::yangmills;

    static Theory yang_mills();

    Role role(const Atom& a) const;
    Expression atom(std::string_view symbol) const;
};

/// Applies a graded derivation of bidegree `deg` defined on generators by
/// `rule`. `through_integrals` lets it commute with symbolic integration.
Expression derive(const Expression& e, Bidegree deg,
                  const std::function<Expression(const Atom&)>& rule,
                  bool through_integrals);

/// Replaces generators by degree-preserving images (absent rule = keep).
Expression substitute(const Expression& e,
                      const std::function<std::optional<Expression>(const Atom&)>& rule);

Expression delta(const Theory& th, const Expression& e);
Expression d(const Theory& th, const Expression& e);
/// D_A e = d e + [A, e].
Expression covariant_D(const Theory& th, const Expression& e);
/// BRST operator: sA = D_A w, sE = -[w,E], sw = -1/2 [w,w], extended so that
/// horizontal variations transform tensorially.
Expression brst_s(const Theory& th, const Expression& e);
/// Vertical variation in the orientation X# = -D_A X, i.e. -s.
Expression vertical(const Theory& th, const Expression& e);
/// delta_H = delta - s.
Expression delta_H(const Theory& th, const Expression& e);
/// delta w + 1/2 [w,w] (Yang-Mills) or delta w - 1/2 [w,w] (diffeo).
Expression curvature(const Theory& th);
/// Replaces the opaque curvature generator (and its derivatives) by its
/// expansion.
Expression expand_curvature(const Theory& th, const Expression& e);
/// Imposes F = 0: F -> 0, delta w -> -1/2 [w,w].
Expression flat_reduce(const Theory& th, const Expression& e);
/// A -> b A b^-1 - db b^-1, E -> b E b^-1, w -> b w b^-1 - delta b b^-1,
/// derivatives through the chain rule.
Expression gauge_substitute(const Theory& th, const Atom& group, const Expression& e);
/// Field-space variation acting on group generators only (the section is
/// held fixed).
Expression delta_group(const Theory& th, const Expression& e);
/// Gauss constraint: dE -> -[A,E] and its variation d delta E -> delta(-[A,E]).
Expression onshell_reduce(const Theory& th, const Expression& e);
/// Moves exact slice terms to the corner: int_S d(a) -> int_C a.
Expression stokes(const Theory& th, const Expression& e);
/// Inverse direction, used for comparisons: int_C a -> int_S d(a).
Expression to_bulk(const Theory& th, const Expression& e);
/// Contraction with the fundamental vector field of a field-independent
/// (0,0) gauge parameter X.
Expression contract_fundamental(const Theory& th, const Atom& param, const Expression& e);

}  // namespace fsforms::calculus
