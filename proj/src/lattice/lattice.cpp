#include "fsforms/lattice/lattice.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>

namespace fsforms::lattice {

using Eigen::MatrixXd;
using Eigen::VectorXd;

LatticeConfig LatticeConfig::zero(const Group& g, int N) {
    if (N < 8) throw Error("lattice needs N >= 8, got " + std::to_string(N));
    LatticeConfig c;
    c.group = g;
    c.N = N;
    c.dx = 1.0 / (N - 1);
    c.A = Field::Zero(c.size());
    c.E = Field::Zero(c.size());
    return c;
}

void LatticeConfig::validate() const {
    if (N < 8) throw Error("lattice needs N >= 8");
    if (A.size() != size() || E.size() != size()) throw Error("field size does not match N*dim");
    if (!A.allFinite() || !E.allFinite()) throw Error("non-finite field value");
}

double norm(const LatticeConfig& cfg, const Field& f) { return std::sqrt(cfg.dx) * f.norm(); }
double inner(const LatticeConfig& cfg, const Field& a, const Field& b) { return cfg.dx * a.dot(b); }

Field cov_deriv(const LatticeConfig& cfg, const Field& X) {
    int k = cfg.dim();
    Field out(std::size_t(cfg.N - 1) * k);
    for (int i = 0; i + 1 < cfg.N; ++i)
        out.segment(i * k, k) = (cfg.site(X, i + 1) - cfg.site(X, i)) / cfg.dx +
                                cfg.group.bracket(cfg.site(cfg.A, i), cfg.site(X, i));
    return out;
}

namespace {

// Link rows of D_A: (N-1)k x Nk. With `with_connection` false, the plain
// difference quotient.
MatrixXd link_matrix(const LatticeConfig& cfg, bool with_connection) {
    int k = cfg.dim(), N = cfg.N;
    MatrixXd D = MatrixXd::Zero((N - 1) * k, N * k);
    MatrixXd I = MatrixXd::Identity(k, k) / cfg.dx;
    for (int i = 0; i + 1 < N; ++i) {
        D.block(i * k, i * k, k, k) = -I;
        D.block(i * k, (i + 1) * k, k, k) = I;
        if (with_connection) D.block(i * k, i * k, k, k) += cfg.group.ad(cfg.site(cfg.A, i));
    }
    return D;
}

MatrixXd selection(const LatticeConfig& cfg, Boundary b) {
    int n = cfg.size(), k = cfg.dim();
    if (b == Boundary::free) return MatrixXd::Identity(n, n);
    MatrixXd S = MatrixXd::Zero(n, n - 2 * k);
    for (int j = 0; j < n - 2 * k; ++j) S(j + k, j) = 1;
    return S;
}

// Orthonormal basis of the complement of the constant fields (cosine modes).
MatrixXd nonconstant_basis(const LatticeConfig& cfg) {
    int N = cfg.N, k = cfg.dim();
    MatrixXd Q = MatrixXd::Zero(N * k, (N - 1) * k);
    for (int m = 1; m < N; ++m)
        for (int i = 0; i < N; ++i) {
            double c = std::sqrt(2.0 / N) * std::cos(M_PI * m * (i + 0.5) / N);
            for (int a = 0; a < k; ++a) Q(i * k + a, (m - 1) * k + a) = c;
        }
    return Q;
}

}  // namespace

MatrixXd cov_deriv_matrix(const LatticeConfig& cfg) {
    int k = cfg.dim(), N = cfg.N;
    MatrixXd D(N * k, N * k);
    D.topRows((N - 1) * k) = link_matrix(cfg, true);
    D.bottomRows(k) = D.middleRows((N - 2) * k, k);
    return D;
}

Field fundamental_vector(const LatticeConfig& cfg, const Field& X) {
    int k = cfg.dim();
    Field out(cfg.size());
    out.head(std::size_t(cfg.N - 1) * k) = -cov_deriv(cfg, X);
    out.tail(k) = out.segment((cfg.N - 2) * k, k);
    return out;
}

MatrixXd fp_operator(const LatticeConfig& cfg, Boundary b) {
    MatrixXd M = link_matrix(cfg, false).transpose() * link_matrix(cfg, true);
    MatrixXd S = selection(cfg, b);
    MatrixXd sym = 0.5 * (M + M.transpose());
    return S.transpose() * sym * S;
}

CoulombConnection::CoulombConnection(const LatticeConfig& cfg, const ConnectionOptions& opt)
    : cfg_(cfg), select_(selection(cfg, opt.boundary)) {
    cfg.validate();
    MatrixXd M = cov_deriv_matrix(cfg) * select_;
    Eigen::BDCSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& s = svd.singularValues();
    long cols = M.cols();
    double smax = s(0);
    long r = 0;
    while (r < cols && s(r) > opt.cutoff * smax) ++r;
    kernel_dim_ = int(cols - r);
    int expected = opt.boundary == Boundary::free ? cfg.dim() : 0;
    if (kernel_dim_ != expected || r == 0)
        throw DegeneracyError("covariant derivative has a kernel of dimension " +
                                  std::to_string(kernel_dim_) + ", expected " +
                                  std::to_string(expected),
                              s(cols - 1));
    sigma_min_ = s(r - 1);
    condition_ = smax / sigma_min_;
    if (sigma_min_ < opt.guard * smax)
        throw DegeneracyError("near-singular covariant derivative (relative smallest singular value " +
                                  std::to_string(sigma_min_ / smax) + ")",
                              sigma_min_);
    U_ = svd.matrixU().leftCols(r);
    V_ = svd.matrixV().leftCols(r);
    inv_sigma_ = s.head(r).cwiseInverse();
}

Field CoulombConnection::omega(const Field& v) const {
    return -(select_ * (V_ * inv_sigma_.asDiagonal() * (U_.transpose() * v)));
}

Field CoulombConnection::vertical(const Field& v) const { return U_ * (U_.transpose() * v); }
Field CoulombConnection::horizontal(const Field& v) const { return v - vertical(v); }
MatrixXd CoulombConnection::vertical_projector() const { return U_ * U_.transpose(); }
MatrixXd CoulombConnection::horizontal_projector() const {
    return MatrixXd::Identity(U_.rows(), U_.rows()) - vertical_projector();
}
Field CoulombConnection::kernel_complement(const Field& X) const {
    return select_ * (V_ * (V_.transpose() * (select_.transpose() * X)));
}

GroupField exp_field(const LatticeConfig& cfg, const Field& X, double t) {
    GroupField g(cfg.N);
    for (int i = 0; i < cfg.N; ++i) g[i] = cfg.group.exp(t * cfg.site(X, i));
    return g;
}

Field Ad_sites(const LatticeConfig& cfg, const GroupField& g, const Field& X) {
    Field out(X.size());
    for (int i = 0; i < cfg.N; ++i) cfg.site(out, i) = cfg.group.Ad(g[i]) * cfg.site(X, i);
    return out;
}

Field Ad_links(const LatticeConfig& cfg, const GroupField& g, const Field& v) {
    Field out(v.size());
    for (int i = 0; i < cfg.N; ++i)
        cfg.site(out, i) = cfg.group.Ad(g[std::min(i, cfg.N - 2)]) * cfg.site(v, i);
    return out;
}

LatticeConfig gauge_transform(const LatticeConfig& cfg, const GroupField& g) {
    if (int(g.size()) != cfg.N) throw Error("group field size does not match N");
    LatticeConfig out = cfg;
    out.A = Ad_links(cfg, g, cfg.A);
    out.E = Ad_sites(cfg, g, cfg.E);
    for (int i = 0; i < cfg.N; ++i) {
        int l = std::min(i, cfg.N - 2);
        out.site(out.A, i) -= cfg.group.log(g[l + 1] * g[l].inverse()) / cfg.dx;
    }
    return out;
}

double equivariance_residual(const LatticeConfig& cfg, const Field& v, const Field& X,
                             double t, const ConnectionOptions& opt) {
    GroupField g = exp_field(cfg, X, t);
    LatticeConfig moved = gauge_transform(cfg, g);
    CoulombConnection before(cfg, opt), after(moved, opt);
    return norm(cfg, after.omega(Ad_links(cfg, g, v)) - Ad_sites(cfg, g, before.omega(v)));
}

CurvatureResult curvature_probe(const LatticeConfig& cfg, const Field& u, const Field& v,
                                double eps, const ConnectionOptions& opt) {
    if (!(eps > 0)) throw Error("curvature probe needs a positive step");
    CoulombConnection base(cfg, opt);
    auto H_at = [&](const Field& shift, const Field& w) {
        LatticeConfig c = cfg;
        c.A += shift;
        return CoulombConnection(c, opt).horizontal(w);
    };
    Field Y = base.horizontal(u), Z = base.horizontal(v);
    // Central-difference bracket [Y, Z] = DZ.Y - DY.Z at step h.
    auto bracket = [&](double h) -> Field {
        Field dZ = (H_at(h * Y, v) - H_at(-h * Y, v)) / (2 * h);
        Field dY = (H_at(h * Z, u) - H_at(-h * Z, u)) / (2 * h);
        return dZ - dY;
    };
    Field c1 = bracket(eps), c2 = bracket(eps / 2), c4 = bracket(eps / 4);
    Field r1 = (4 * c2 - c1) / 3, r2 = (4 * c4 - c2) / 3;

    double rounding = 64 * std::numeric_limits<double>::epsilon() * base.condition() *
                      (norm(cfg, Y) + norm(cfg, Z)) / (eps / 4);
    double d1 = norm(cfg, c1 - c2), d2 = norm(cfg, c2 - c4);
    if (d2 > 100 * rounding && d1 / d2 < 2)
        throw Error("curvature extrapolation did not converge (step ratio " + std::to_string(d1 / d2) +
                    ")");

    CurvatureResult res;
    res.value = -base.omega(r2);
    res.norm = norm(cfg, res.value);
    res.floor = norm(cfg, base.omega(r2 - r1)) + rounding;
    return res;
}

double theta(const LatticeConfig& cfg, const Field& v) { return inner(cfg, cfg.E, v); }

double theta_H(const LatticeConfig& cfg, const Field& v, const ConnectionOptions& opt) {
    return theta(cfg, CoulombConnection(cfg, opt).horizontal(v));
}

double corner_charge(const LatticeConfig& cfg, const Field& X) {
    return cfg.site(cfg.E, cfg.N - 1).dot(cfg.site(X, cfg.N - 1)) -
           cfg.site(cfg.E, 0).dot(cfg.site(X, 0));
}

namespace {

// The FP operator along A = t*A0 restricted off its t = 0 kernel: L + t K.
struct Pencil {
    MatrixXd L, K;

    Pencil(const LatticeConfig& A0, Boundary b) {
        MatrixXd Q = selection(A0, b);
        if (b == Boundary::free) Q = nonconstant_basis(A0);
        MatrixXd G = link_matrix(A0, false) * Q;
        MatrixXd DA = (link_matrix(A0, true) - link_matrix(A0, false)) * Q;
        L = G.transpose() * G;
        MatrixXd GK = G.transpose() * DA;
        K = 0.5 * (GK + GK.transpose());
    }

    double lambda_min(double t, double* condition) const {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(L + t * K, Eigen::EigenvaluesOnly);
        const VectorXd& l = es.eigenvalues();
        if (condition) *condition = l.cwiseAbs().maxCoeff() / l.cwiseAbs().minCoeff();
        return l(0);
    }
};

}  // namespace

double fp_lambda_min(const LatticeConfig& cfg, Boundary b, double* condition) {
    return Pencil(cfg, b).lambda_min(1.0, condition);
}

GribovReport gribov_scan(const LatticeConfig& A0, double t_max, int steps, Boundary b) {
    if (steps <= 0) throw Error("gribov scan needs steps > 0");
    if (!(t_max > 0)) throw Error("gribov scan needs t_max > 0");
    A0.validate();
    Pencil pencil(A0, b);
    auto lambda = [&](double t) { return pencil.lambda_min(t, nullptr); };
    GribovReport rep;
    double prev_t = 0, prev = lambda(0);
    for (int j = 1; j <= steps; ++j) {
        double t = t_max * j / steps;
        ScanPoint p;
        p.t = t;
        p.lambda_min = pencil.lambda_min(t, &p.condition);
        rep.points.push_back(p);
        if (!rep.bracket && prev > 0 && p.lambda_min <= 0) {
            rep.bracket = {prev_t, t};
            if (p.lambda_min == 0) {
                rep.t_star = t;
            } else {
                std::uintmax_t iters = 60;
                auto r = boost::math::tools::toms748_solve(lambda, prev_t, t, prev, p.lambda_min,
                                                           boost::math::tools::eps_tolerance<double>(30),
                                                           iters);
                rep.t_star = 0.5 * (r.first + r.second);
            }
        }
        prev_t = t;
        prev = p.lambda_min;
    }
    return rep;
}

Field smooth_field(const Group& g, int N, Rng& rng, int modes, double amplitude) {
    int k = g.dim();
    std::normal_distribution<double> normal;
    std::vector<double> c0(k), c(k * modes), s(k * modes);
    for (int a = 0; a < k; ++a) {
        c0[a] = normal(rng);
        for (int m = 0; m < modes; ++m) {
            c[a * modes + m] = normal(rng);
            s[a * modes + m] = normal(rng);
        }
    }
    Field f(N * k);
    double dx = 1.0 / (N - 1);
    for (int i = 0; i < N; ++i)
        for (int a = 0; a < k; ++a) {
            double x = i * dx, val = c0[a];
            for (int m = 1; m <= modes; ++m)
                val += (c[a * modes + m - 1] * std::cos(M_PI * m * x) +
                        s[a * modes + m - 1] * std::sin(M_PI * m * x)) / m;
            f(i * k + a) = amplitude * val;
        }
    return f;
}

LatticeConfig random_config(const Group& g, int N, Rng& rng, double amplitude) {
    LatticeConfig c = LatticeConfig::zero(g, N);
    c.A = smooth_field(g, N, rng, 4, amplitude);
    c.site(c.A, N - 1) = c.site(c.A, N - 2).eval();
    c.E = smooth_field(g, N, rng, 4, 1.0);
    return c;
}

void impose_gauss(LatticeConfig& cfg, Rng& rng) {
    std::normal_distribution<double> normal;
    int k = cfg.dim();
    for (int a = 0; a < k; ++a) cfg.E(a) = normal(rng);
    for (int i = 0; i + 1 < cfg.N; ++i)
        cfg.site(cfg.E, i + 1) =
            cfg.site(cfg.E, i) - cfg.dx * cfg.group.bracket(cfg.site(cfg.A, i), cfg.site(cfg.E, i));
}

Field normalized(const LatticeConfig& cfg, Field f) {
    double n = norm(cfg, f);
    if (n == 0) throw Error("cannot normalize a zero field");
    return f / n;
}

}  // namespace fsforms::lattice
