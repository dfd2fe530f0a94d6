#include <cmath>

#include "doctest.h"
#include "fsforms/lattice/lattice.hpp"

using namespace fsforms;
using namespace fsforms::lattice;

namespace {

Group su2() { return Group::make(GroupKind::su2); }
Group u1() { return Group::make(GroupKind::u1); }

// Rotation by |x| about x, written out (Rodrigues).
Eigen::Matrix3d rodrigues(const Eigen::Vector3d& x) {
    double a = x.norm();
    if (a == 0) return Eigen::Matrix3d::Identity();
    Eigen::Vector3d n = x / a;
    Eigen::Matrix3d K;
    K << 0, -n(2), n(1), n(2), 0, -n(0), -n(1), n(0), 0;
    return Eigen::Matrix3d::Identity() + std::sin(a) * K + (1 - std::cos(a)) * K * K;
}

// A smooth functional of A used as a field-dependent gauge transformation:
// beta_i = exp(c * integral_0^{x_i} A).
GroupField beta_of(const LatticeConfig& cfg, double c) {
    Field phi = Field::Zero(cfg.size());
    for (int i = 1; i < cfg.N; ++i)
        cfg.site(phi, i) = cfg.site(phi, i - 1) + cfg.dx * cfg.site(cfg.A, i - 1);
    return exp_field(cfg, phi, c);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("group") {
    Group g = su2();
    Rng rng(3);
    std::normal_distribution<double> n;
    for (int t = 0; t < 20; ++t) {
        Eigen::Vector3d x(n(rng), n(rng), n(rng)), a(n(rng), n(rng), n(rng)), b(n(rng), n(rng), n(rng));
        x *= 0.9;
        CHECK((g.Ad(g.exp(x)) - rodrigues(x)).norm() < 1e-12);
        CHECK((g.log(g.exp(x)) - x).norm() < 1e-12);
        Eigen::Matrix3d R = g.Ad(g.exp(x));
        CHECK((R * g.bracket(a, b) - g.bracket(R * a, R * b)).norm() < 1e-12);
        CHECK((g.ad(a) * b - g.bracket(a, b)).norm() < 1e-15);
    }
    Group h = u1();
    Eigen::VectorXd th(1);
    th << 2.5;
    CHECK(h.log(h.exp(th))(0) == doctest::Approx(2.5));
    th << 4.0;
    CHECK(h.log(h.exp(th))(0) == doctest::Approx(4.0 - 2 * M_PI));
    CHECK(h.bracket(th, th)(0) == 0);
    CHECK_THROWS(Group::parse("su3"));
}

TEST_CASE("config validation") {
    CHECK_THROWS(LatticeConfig::zero(su2(), 4));
    LatticeConfig c = LatticeConfig::zero(su2(), 16);
    c.A(3) = std::nan("");
    CHECK_THROWS(c.validate());
}

TEST_CASE("smooth fields are resolution independent") {
    Rng a(9), b(9);
    Field f = smooth_field(su2(), 65, a), g = smooth_field(su2(), 129, b);
    for (int i = 0; i < 65; ++i)
        CHECK((f.segment(3 * i, 3) - g.segment(3 * 2 * i, 3)).norm() < 1e-12);
}

TEST_CASE("covariant derivative") {
    LatticeConfig c = LatticeConfig::zero(su2(), 16);
    Field X = Field::Ones(c.size());
    CHECK(cov_deriv(c, X).norm() == 0);
    CHECK(fundamental_vector(c, Field::Zero(c.size())).norm() == 0);

    Rng rng(5);
    LatticeConfig a = random_config(u1(), 32, rng);
    Field xi = smooth_field(u1(), 32, rng);
    Field dX = cov_deriv(a, xi);
    for (int i = 0; i + 1 < 32; ++i) CHECK(dX(i) == doctest::Approx((xi(i + 1) - xi(i)) / a.dx));

    // matrix form agrees with the direct evaluation
    LatticeConfig s = random_config(su2(), 24, rng);
    Field Y = smooth_field(su2(), 24, rng);
    Field full = cov_deriv_matrix(s) * Y;
    CHECK((full.head(23 * 3) - cov_deriv(s, Y)).norm() < 1e-10);
    CHECK((fundamental_vector(s, Y) + full).norm() < 1e-10);
}

TEST_CASE("fundamental vector is the tangent of the gauge orbit") {
    Rng rng(11);
    LatticeConfig c = random_config(su2(), 64, rng);
    Field X = smooth_field(su2(), 64, rng);
    Field Xs = fundamental_vector(c, X);
    auto orbit = [&](double t) { return gauge_transform(c, exp_field(c, X, t)).A; };
    double prev = 0;
    for (double dt : {1e-2, 5e-3}) {
        Field fd = (orbit(dt) - orbit(-dt)) / (2 * dt);
        double err = norm(c, fd - Xs);
        CHECK(err < 1e-2 * norm(c, Xs));
        if (prev > 0) CHECK(prev / err == doctest::Approx(4).epsilon(0.05));
        prev = err;
    }
    // Richardson on the one-sided quotient (transform - identity)/t
    auto q = [&](double t) { return Field((orbit(t) - c.A) / t); };
    Field rich = 2 * q(1e-4) - q(2e-4);
    CHECK(norm(c, rich - Xs) < 1e-6 * norm(c, Xs));
    CHECK(norm(c, gauge_transform(c, exp_field(c, X, 0)).A - c.A) == 0);
}

TEST_CASE("gauge transformations compose up to discretization error") {
    double prev = 0;
    for (int N : {256, 512}) {
        Rng rng(21);
        LatticeConfig c = random_config(su2(), N, rng);
        GroupField g = exp_field(c, smooth_field(su2(), N, rng), 0.7);
        GroupField h = exp_field(c, smooth_field(su2(), N, rng), 0.7);
        GroupField hg(N);
        for (int i = 0; i < N; ++i) hg[i] = h[i] * g[i];
        LatticeConfig two = gauge_transform(gauge_transform(c, g), h);
        LatticeConfig one = gauge_transform(c, hg);
        double err = norm(c, two.A - one.A);
        CHECK(norm(c, two.E - one.E) < 1e-12);
        CHECK(err < 0.1);
        if (prev > 0) CHECK(prev / err == doctest::Approx(2).epsilon(0.2));
        prev = err;
    }
}

TEST_CASE("Faddeev-Popov operator") {
    int N = 40;
    LatticeConfig c = LatticeConfig::zero(u1(), N);
    Rng rng(1);
    c.A = smooth_field(u1(), N, rng);
    Eigen::MatrixXd M = fp_operator(c);
    CHECK((M - M.transpose()).norm() < 1e-12);
    Eigen::VectorXd l = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues();
    for (int m = 0; m < N; ++m) {
        double exact = 4 * std::pow(std::sin(M_PI * m / (2.0 * N)), 2) / (c.dx * c.dx);
        CHECK(l(m) == doctest::Approx(exact).epsilon(1e-10).scale(1));
    }
    LatticeConfig s = LatticeConfig::zero(su2(), N);
    Eigen::VectorXd l3 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fp_operator(s)).eigenvalues();
    for (int m = 0; m < 3 * N; ++m) CHECK(l3(m) == doctest::Approx(l(m / 3)).scale(1));
    CHECK(fp_operator(s, Boundary::fixed).rows() == 3 * (N - 2));
}

TEST_CASE("Coulomb connection projectors") {
    for (Group g : {u1(), su2()}) {
        Rng rng(42);
        LatticeConfig c = random_config(g, 48, rng);
        CoulombConnection w(c);
        CHECK(w.kernel_dim() == g.dim());
        Eigen::MatrixXd V = w.vertical_projector(), H = w.horizontal_projector();
        CHECK((V * V - V).norm() < 1e-10);
        CHECK((H * H - H).norm() < 1e-10);
        CHECK((V + H - Eigen::MatrixXd::Identity(c.size(), c.size())).norm() < 1e-12);
        Field v = smooth_field(g, 48, rng);
        CHECK(norm(c, w.omega(w.horizontal(v))) < 1e-10);
        CHECK(norm(c, w.horizontal(w.horizontal(v)) - w.horizontal(v)) < 1e-10);
        // V(v) is the fundamental vector of w(v)
        CHECK(norm(c, w.vertical(v) - fundamental_vector(c, w.omega(v))) < 1e-10);
        Field X = w.kernel_complement(smooth_field(g, 48, rng));
        CHECK(norm(c, w.omega(fundamental_vector(c, X)) - X) < 1e-10);
        // the kernel is spanned by covariantly constant fields
        Field K = smooth_field(g, 48, rng);
        K -= w.kernel_complement(K);
        CHECK(norm(c, cov_deriv(c, K)) < 1e-9 * norm(c, K));
        ConnectionOptions fixed;
        fixed.boundary = Boundary::fixed;
        CHECK(CoulombConnection(c, fixed).kernel_dim() == 0);
    }
}

TEST_CASE("abelian pure gauge inversion") {
    Rng rng(8);
    LatticeConfig c = random_config(u1(), 64, rng);
    Field xi = smooth_field(u1(), 64, rng);
    xi.array() -= xi.mean();
    Field v = fundamental_vector(c, xi);
    CHECK(norm(c, CoulombConnection(c).omega(v) - xi) < 1e-10);
}

TEST_CASE("degeneracy error") {
    Rng rng(2);
    LatticeConfig c = random_config(su2(), 32, rng);
    ConnectionOptions opt;
    opt.guard = 0.5;
    try {
        CoulombConnection w(c, opt);
        FAIL("no degeneracy error");
    } catch (const DegeneracyError& e) {
        CHECK(e.smallest_singular_value() > 0);
    }
    opt.guard = 0;
    opt.cutoff = 0.9;
    CHECK_THROWS_AS(CoulombConnection(c, opt), DegeneracyError);
}

TEST_CASE("equivariance") {
    Rng rng(4);
    LatticeConfig a = random_config(u1(), 64, rng);
    Field v = normalized(a, smooth_field(u1(), 64, rng));
    Field X = normalized(a, smooth_field(u1(), 64, rng));
    CHECK(equivariance_residual(a, v, X, 0.8) < 1e-10);

    double prev = 0;
    for (int N : {64, 128, 256}) {
        Rng r(4);
        LatticeConfig c = random_config(su2(), N, r);
        Field u = normalized(c, smooth_field(su2(), N, r));
        Field Y = normalized(c, smooth_field(su2(), N, r));
        double res = equivariance_residual(c, u, Y, 0.3);
        if (prev > 0) CHECK(prev / res == doctest::Approx(2).epsilon(0.2));
        prev = res;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("field-dependent gauge transformation") {
    // w_{A'}(v') = Ad_b w_A(v) + (delta b) b^-1 up to the kernel of D_{A'}
    double prev = 0;
    for (int N : {64, 128}) {
        Rng rng(6);
        LatticeConfig c = random_config(su2(), N, rng);
        Field v = normalized(c, smooth_field(su2(), N, rng));
        auto moved = [&](const Field& A) {
            LatticeConfig d = c;
            d.A = A;
            return gauge_transform(d, beta_of(d, 0.8));
        };
        double eps = 1e-5;
        LatticeConfig cp = moved(c.A);
        Field vp = (moved(c.A + eps * v).A - moved(c.A - eps * v).A) / (2 * eps);
        GroupField b = beta_of(c, 0.8);
        LatticeConfig plus = c, minus = c;
        plus.A += eps * v;
        minus.A -= eps * v;
        GroupField bp = beta_of(plus, 0.8), bm = beta_of(minus, 0.8);
        Field xi(c.size());
        for (int i = 0; i < N; ++i) c.site(xi, i) = c.group.log(bp[i] * bm[i].inverse()) / (2 * eps);

        CoulombConnection w(c), wp(cp);
        Field expected = wp.kernel_complement(Ad_sites(c, b, w.omega(v)) + xi);
        double res = norm(c, wp.omega(vp) - expected);
        CHECK(res < 0.05 * norm(c, xi));
        if (prev > 0) CHECK(prev / res == doctest::Approx(2).epsilon(0.25));
        prev = res;

        // theta_H is invariant, theta moves by the corner term
        impose_gauss(c, rng);
        cp = moved(c.A);
        cp.E = Ad_sites(c, b, c.E);
        double dH = std::abs(theta_H(cp, vp) - theta_H(c, v));
        double d = theta(cp, vp) - theta(c, v);
        CHECK(dH < 2 * c.dx * std::abs(d) + 1e-9);
        CHECK(d == doctest::Approx(-corner_charge(cp, xi)).epsilon(10 * c.dx));
    }
}

TEST_CASE("curvature probe") {
    ConnectionOptions fixed;
    fixed.boundary = Boundary::fixed;
    for (int s = 0; s < 5; ++s) {
        Rng rng(500 + s);
        LatticeConfig a = random_config(u1(), 24, rng);
        Field u = smooth_field(u1(), 24, rng), v = smooth_field(u1(), 24, rng);
        auto r = curvature_probe(a, u, v, 1e-2, fixed);
        CHECK(r.norm <= r.floor);

        LatticeConfig c = random_config(su2(), 24, rng);
        Field p = smooth_field(su2(), 24, rng), q = smooth_field(su2(), 24, rng);
        auto f = curvature_probe(c, p, q, 1e-2, fixed);
        auto b = curvature_probe(c, q, p, 1e-2, fixed);
        CHECK(f.norm > 10 * f.floor);
        CHECK(norm(c, f.value + b.value) <= f.floor + b.floor);
        // free endpoints: the orbit space is a point, the connection is flat
        CHECK(curvature_probe(c, p, q, 1e-2).norm < 1e-6 * f.norm);
    }
    Rng rng(1);
    LatticeConfig c = random_config(su2(), 16, rng);
    CHECK_THROWS(curvature_probe(c, c.A, c.E, 0));
}

TEST_CASE("presymplectic potential and corner charge") {
    Rng rng(13);
    LatticeConfig z = random_config(su2(), 32, rng);
    z.E.setZero();
    Field X = smooth_field(su2(), 32, rng), v = smooth_field(su2(), 32, rng);
    CHECK(theta(z, v) == 0);
    CHECK(theta_H(z, v) == 0);
    CHECK(corner_charge(z, X) == 0);

    // summation by parts against the directly summed Gauss term
    double prevC = 0;
    for (int N : {128, 256, 512}) {
        Rng r(13);
        LatticeConfig c = random_config(su2(), N, r);
        Field Y = smooth_field(su2(), N, r);
        Field DE = cov_deriv(c, c.E);
        double gauss = 0;
        for (int i = 0; i + 1 < N; ++i) gauss += c.site(DE, i).dot(c.site(Y, i)) * c.dx;
        double lhs = theta(c, fundamental_vector(c, Y));
        double C = std::abs(lhs + corner_charge(c, Y) - gauss) / c.dx;
        CHECK(C < 100);
        if (prevC > 0) CHECK(C == doctest::Approx(prevC).epsilon(0.3));
        prevC = C;

        impose_gauss(c, r);
        CHECK(norm(c, cov_deriv(c, c.E)) < 1e-10);
        CHECK(std::abs(theta_H(c, fundamental_vector(c, Y))) < 1e-9);
    }
}

TEST_CASE("Gribov scan") {
    Rng rng(42);
    LatticeConfig a = random_config(u1(), 48, rng);
    auto r = gribov_scan(a, 50, 10);
    CHECK_FALSE(r.t_star);
    CHECK(r.points.size() == 10);
    for (const auto& p : r.points) CHECK(p.lambda_min > 0);
    CHECK_THROWS(gribov_scan(a, 5, 0));

    LatticeConfig s = random_config(su2(), 48, rng);
    auto q = gribov_scan(s, 10, 20);
    REQUIRE(q.t_star);
    CHECK(*q.t_star >= q.bracket->first);
    CHECK(*q.t_star <= q.bracket->second);
    LatticeConfig at = s;
    at.A *= *q.t_star;
    CHECK(std::abs(fp_lambda_min(at, Boundary::free)) < 1e-6);
    CHECK(q.points.front().lambda_min > 0);
    CHECK(q.points.back().lambda_min < 0);
}

}
