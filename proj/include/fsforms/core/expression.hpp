#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fsforms/core/atom.hpp"
#include "fsforms/core/bidegree.hpp"

namespace fsforms {

using Rational = boost::rational<std::int64_t>;

/// Symbolic integration domain: the spatial slice, its corner, or spacetime.
enum class Domain : std::uint8_t { none, slice, corner, spacetime };

int dimension(Domain d);

/// `open` words are adjoint-valued matrix products, `traced` words are closed
/// traces, `scalar` monomials carry no matrix word at all.
enum class WordKind : std::uint8_t { open, traced, scalar };

/// One product of generators: scalar factors followed by a matrix word,
/// optionally traced and integrated.
struct Monomial {
    Domain domain = Domain::none;
    WordKind kind = WordKind::scalar;
    std::vector<Atom> scalars;
    std::vector<Atom> word;

    /// Degree after integration (spacetime degree lowered by the domain).
    Bidegree degree() const;
    Bidegree integrand_degree() const;
    bool is_adjoint() const { return kind == WordKind::open; }

    auto operator<=>(const Monomial&) const = default;
};

Bidegree degree_of(const std::vector<Atom>& atoms);

/// Optional knobs that pick one reduction order among the equivalent ones.
/// Canonical forms must not depend on them.
struct ReductionOrder {
    std::uint64_t seed = 0;
};

/// Brings a monomial to canonical form, returning the accumulated sign
/// (0 when the monomial vanishes, e.g. a repeated odd scalar or a traced word
/// equal to minus its own rotation).
int normalize(Monomial& m, const ReductionOrder& order = {});

/// Formal rational combination of canonical monomials, homogeneous in
/// bidegree and valuedness.
class Expression {
public:
    using Terms = std::map<Monomial, Rational>;

    Expression() = default;

    static Expression atom(const Atom& a);
    static Expression constant(Rational c);   // scalar-valued
    static Expression identity();             // adjoint-valued unit matrix
    static Expression from_monomial(Monomial m, Rational c,
                                    const ReductionOrder& order = {});

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Bidegree of the (homogeneous) expression; nullopt for zero.
    std::optional<Bidegree> degree() const;
    /// True for adjoint (open) expressions, false for scalar; nullopt for zero.
    std::optional<bool> adjoint() const;

    Expression& operator+=(const Expression& o);
    Expression& operator-=(const Expression& o);
    Expression& operator*=(Rational c);

    friend Expression operator+(Expression a, const Expression& b) { return a += b; }
    friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
    friend Expression operator-(Expression a) { return a *= Rational(-1); }
    friend Expression operator*(Rational c, Expression a) { return a *= c; }

    bool operator==(const Expression& o) const { return terms_ == o.terms_; }

    /// Adds a monomial after normalizing it.
    void add(Monomial m, Rational c, const ReductionOrder& order = {});

    /// Sum of f(monomial) * coefficient over all terms.
    Expression map_terms(const std::function<Expression(const Monomial&)>& f) const;

private:
    void add_canonical(const Monomial& m, Rational c);

    Terms terms_;
};

/// Graded (matrix) product; factor order is preserved.
Expression mul(const Expression& a, const Expression& b);
/// a b - (-1)^k b a with k the Koszul parity of the operand bidegrees.
Expression bracket(const Expression& a, const Expression& b);
Expression trace(const Expression& a);
/// Attaches an integration domain; checks the integrand's spacetime degree.
Expression integrate(const Expression& a, Domain domain);
/// Re-normalizes every term from scratch (idempotent).
Expression canonicalize(const Expression& a, const ReductionOrder& order = {});
/// canonicalize(a - b) == 0; comparing adjoint with scalar raises.
bool equals(const Expression& a, const Expression& b);

}  // namespace fsforms
