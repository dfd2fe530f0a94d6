#include <random>

#include "doctest.h"
#include "fsforms/calculus/calculus.hpp"
#include "fsforms/core/error.hpp"
#include "fsforms/dsl/dsl.hpp"

using namespace fsforms;
using calculus::Theory;

namespace {

struct Fixture {
    Theory th = Theory::yang_mills();
    dsl::Context ctx{th};
    Expression p(const char* s) const { return ctx.parse(s); }
};

// Adjoint generators q<f><s> for every bidegree up to (2,2), plus scalars
// c<f><s>; used by the randomized properties.
struct Alphabet {
    Theory th = Theory::yang_mills();
    std::vector<Atom> adjoint;
    std::vector<Atom> scalar;
    Alphabet() {
        for (int f = 0; f <= 2; ++f)
            for (int s = 0; s <= 2; ++s) {
                std::string tag = std::to_string(f) + std::to_string(s);
                adjoint.push_back(th.registry.declare("q" + tag, {f, s}, Valuedness::adjoint));
                scalar.push_back(th.registry.declare("c" + tag, {f, s}, Valuedness::scalar));
            }
    }
};

Expression product(const std::vector<Atom>& atoms) {
    Expression e = Expression::identity();
    for (const auto& a : atoms) e = mul(e, Expression::atom(a));
    return e;
}

}  // namespace

TEST_SUITE("forms-core") {

TEST_CASE("declare_atom registers generators and rejects duplicates") {
    Registry reg;
    Atom a = reg.declare("A", {0, 1}, Valuedness::adjoint);
    CHECK(a.degree() == Bidegree{0, 1});
    Atom w = reg.declare("w", {1, 0}, Valuedness::adjoint);
    CHECK(w.degree() == Bidegree{1, 0});
    CHECK_THROWS_AS(reg.declare("A", {0, 1}, Valuedness::adjoint), DeclarationError);
    CHECK_THROWS_AS(reg.declare("g", {1, 0}, Valuedness::group), DeclarationError);
    Atom g = reg.declare("g", {0, 0}, Valuedness::group);
    CHECK(g.with_delta().degree() == Bidegree{1, 0});
    CHECK(g.with_d().degree() == Bidegree{0, 1});
}

TEST_CASE("bracket sign rule") {
    Fixture fx;
    CHECK(fx.p("bracket(w, w)") == fx.p("2*w*w"));
    CHECK(fx.p("bracket(E, E)").is_zero());
    CHECK(fx.p("bracket(w, bracket(w, E)) - 1/2*bracket(bracket(w, w), E)").is_zero());
    CHECK(fx.p("w*w - 1/2*bracket(w,w)").is_zero());
    // swapping the two (1,0) entries of a bracket costs a sign
    CHECK(fx.p("bracket(w, delta(A))") == fx.p("bracket(delta(A), w)"));
    CHECK(fx.p("bracket(A, E) + bracket(E, A)").is_zero());
}

TEST_CASE("scalar generators commute out with Koszul signs") {
    Fixture fx;
    fx.th.registry.declare("x", {0, 0}, Valuedness::scalar);
    fx.th.registry.declare("u", {1, 0}, Valuedness::scalar);
    fx.th.registry.declare("v", {1, 0}, Valuedness::scalar);
    CHECK(fx.p("x*w") == fx.p("w*x"));
    CHECK(fx.p("u*v + v*u").is_zero());
    CHECK(fx.p("u*u").is_zero());
    CHECK(fx.p("w*u") == fx.p("-u*w"));
    CHECK(fx.p("A*u") == fx.p("u*A"));
}

TEST_CASE("trace cyclicity and ad-invariance") {
    Fixture fx;
    CHECK(fx.p("tr(X*Y)") == fx.p("tr(Y*X)"));
    CHECK(fx.p("tr(w*w)").is_zero());
    CHECK(fx.p("tr(bracket(w,E)*d(w))") == fx.p("tr(w*bracket(E,d(w)))"));
    CHECK(fx.p("tr(bracket(w,E)*bracket(w,A))") ==
          fx.p("1/2*tr(bracket(w,w)*bracket(E,A))"));
    // moving d(w) (1,1) past E*w (1,2) costs (-1)^3
    CHECK(fx.p("tr(E*w*d(w))") == fx.p("-tr(d(w)*E*w)"));
}

TEST_CASE("traced rotation sign agrees with pairwise transposition oracle") {
    Alphabet al;
    std::mt19937 rng(7);
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t n = 1 + rng() % 4;
        std::vector<Atom> w;
        for (std::size_t i = 0; i < n; ++i) {
            Atom a = al.adjoint[rng() % al.adjoint.size()];
            w.push_back(a);
        }
        Expression base = trace(product(w));
        // Full check over all rotations of the original word.
        int acc = 1;
        std::vector<Atom> cur = w;
        for (std::size_t k = 0; k < n; ++k) {
            int sign = 1;
            for (std::size_t j = 1; j < cur.size(); ++j) sign *= koszul_sign(cur[0].degree(), cur[j].degree());
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            acc *= sign;
            Expression rot = trace(product(cur));
            rot *= Rational(acc);
            CHECK(rot == base);
        }
    }
}

TEST_CASE("canonicalize is idempotent and order independent") {
    Alphabet al;
    std::mt19937 rng(11);
    Atom b = *al.th.registry.find("b");
    Atom bi = al.th.registry.inverse(b);
    for (int trial = 0; trial < 300; ++trial) {
        Monomial m;
        m.kind = rng() % 2 ? WordKind::traced : WordKind::open;
        std::size_t n = 1 + rng() % 5;
        for (std::size_t i = 0; i < n; ++i) {
            switch (rng() % 4) {
                case 0: m.word.push_back(b); break;
                case 1: m.word.push_back(bi); break;
                default: m.word.push_back(al.adjoint[rng() % al.adjoint.size()]);
            }
        }
        for (int i = 0; i < 2; ++i) m.scalars.push_back(al.scalar[rng() % al.scalar.size()]);
        Expression reference = Expression::from_monomial(m, 1);
        CHECK(canonicalize(reference) == reference);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Expression other = Expression::from_monomial(m, 1, ReductionOrder{seed * 7919 + trial});
            CHECK(other == reference);
        }
    }
}

TEST_CASE("group relations cancel") {
    Fixture fx;
    CHECK(fx.p("b*inv(b)") == Expression::identity());
    CHECK(fx.p("inv(b)*A*b*inv(b)*b") == fx.p("inv(b)*A*b"));
    CHECK(fx.p("tr(b*E*inv(b))") == fx.p("tr(E)"));
}

TEST_CASE("equals") {
    Fixture fx;
    CHECK(equals(fx.p("delta(A)"), fx.p("delta(A)")));
    CHECK(equals(fx.p("bracket(w,w)"), fx.p("2*w*w")));
    CHECK_THROWS_AS(equals(fx.p("E"), fx.p("tr(E)")), ValuednessError);
    CHECK_FALSE(equals(fx.p("E"), fx.p("A")));
}

TEST_CASE("parse errors") {
    Fixture fx;
    CHECK_THROWS_AS(fx.p("delta(A) + E"), ParseError);
    CHECK_THROWS_AS(fx.p("Q"), ParseError);
    try {
        fx.p("A +\n  * E");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(fx.p("tr(tr(E))"), ParseError);
    CHECK_THROWS_AS(fx.p("bracket(A)"), ParseError);
    CHECK_THROWS_AS(fx.p("intC(tr(E*delta(A)))"), ParseError);
    CHECK_NOTHROW(fx.p("intS(tr(E*delta(A)))"));
}

TEST_CASE("parse builds operator images") {
    Fixture fx;
    Expression dHA = fx.p("delta(A) + bracket(w, A) - d(w)");
    CHECK(dHA.degree() == Bidegree{1, 1});
    CHECK(dHA.size() == 4);
    Expression theta = fx.p("intS(tr(E * delta(A)))");
    CHECK(theta.degree() == Bidegree{1, 0});
    CHECK(theta.adjoint() == false);
}

TEST_CASE("graded Jacobi and bracket antisymmetry on random generators") {
    Alphabet al;
    std::mt19937 rng(3);
    auto pick = [&] { return Expression::atom(al.adjoint[rng() % al.adjoint.size()]); };
    for (int trial = 0; trial < 300; ++trial) {
        Expression a = pick(), b = pick(), c = pick();
        Bidegree da = *a.degree(), db = *b.degree(), dc = *c.degree();
        Expression anti = bracket(a, b);
        Expression swapped = bracket(b, a);
        swapped *= Rational(koszul_sign(da, db));
        CHECK((anti + swapped).is_zero());
        // (-1)^{k(a,c)} [a,[b,c]] + cyclic = 0
        Expression j1 = bracket(a, bracket(b, c));
        j1 *= Rational(koszul_sign(da, dc));
        Expression j2 = bracket(b, bracket(c, a));
        j2 *= Rational(koszul_sign(db, da));
        Expression j3 = bracket(c, bracket(a, b));
        j3 *= Rational(koszul_sign(dc, db));
        CHECK((j1 + j2 + j3).is_zero());
    }
}

TEST_CASE("sign coherence for scalar-valued products") {
    Alphabet al;
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Expression a = Expression::atom(al.scalar[rng() % al.scalar.size()]);
        Expression b = trace(mul(Expression::atom(al.adjoint[rng() % al.adjoint.size()]),
                                 Expression::atom(al.adjoint[rng() % al.adjoint.size()])));
        if (b.is_zero()) continue;
        Expression ab = mul(a, b), ba = mul(b, a);
        ba *= Rational(koszul_sign(*a.degree(), *b.degree()));
        CHECK(ab == ba);
    }
}

TEST_CASE("pretty printer round-trips") {
    Fixture fx;
    fx.th.registry.declare("x", {1, 1}, Valuedness::scalar);
    const char* sources[] = {
        "delta(A) + bracket(w, A) - d(w)",
        "intS(tr(E*delta(A))) - intC(tr(E*w))",
        "3/2*b*A*inv(b) - d(b)*inv(b)",
        "x*tr(E*w*d(delta(A)))",
        "tr(b*inv(b))",
        "id + b*X*inv(b)",
    };
    for (const char* src : sources) {
        Expression e = fx.p(src);
        std::string text = dsl::print(fx.th.registry, e);
        CAPTURE(text);
        CHECK(fx.p(text.c_str()) == e);
    }
    std::mt19937 rng(9);
    const char* pieces[] = {"A", "E", "w", "delta(A)", "d(w)", "delta(E)", "b", "inv(b)", "X"};
    for (int trial = 0; trial < 100; ++trial) {
        std::string src = "tr(";
        std::size_t n = 1 + rng() % 4;
        for (std::size_t i = 0; i < n; ++i) src += (i ? "*" : "") + std::string(pieces[rng() % 9]);
        src += ")";
        Expression e = fx.p(src.c_str());
        CHECK(fx.p(dsl::print(fx.th.registry, e).c_str()) == e);
    }
}

}
