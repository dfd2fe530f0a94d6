#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fsforms/core/error.hpp"
#include "fsforms/lattice/group.hpp"

namespace fsforms::lattice {

/// The connection could not be built: the covariant derivative has a kernel
/// of unexpected dimension or a singular value too close to it.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, double sigma)
        : Error(what), sigma_(sigma) {}
    double smallest_singular_value() const { return sigma_; }

private:
    double sigma_;
};

/// Per-site algebra values, site-major: entry i*dim + a.
using Field = Eigen::VectorXd;
using GroupField = std::vector<Group::Element>;

/// Whether gauge parameters may move the endpoints (free) or vanish there.
enum class Boundary { free, fixed };

/// Sampled 1-D configuration on [0,1] with N sites, dx = 1/(N-1).
///
/// A, tangent vectors and covariant derivatives are link-valued: slot i < N-1
/// is the link (i, i+1); slot N-1 closes the last link and transforms with
/// the same group element. E and gauge parameters are site-valued.
struct LatticeConfig {
    Group group = Group::make(GroupKind::su2);
    int N = 0;
    double dx = 0;
    Field A;
    Field E;

    static LatticeConfig zero(const Group& g, int N);
    int dim() const { return group.dim(); }
    int size() const { return N * group.dim(); }
    auto site(Field& f, int i) const { return f.segment(i * dim(), dim()); }
    auto site(const Field& f, int i) const { return f.segment(i * dim(), dim()); }
    void validate() const;
};

/// dx-weighted L2 norm and inner product.
double norm(const LatticeConfig& cfg, const Field& f);
double inner(const LatticeConfig& cfg, const Field& a, const Field& b);

/// (D_A X)_i = (X_{i+1} - X_i)/dx + [A_i, X_i] on the N-1 links.
Field cov_deriv(const LatticeConfig& cfg, const Field& X);
/// D_A on all N slots; the closing slot repeats the last link.
Eigen::MatrixXd cov_deriv_matrix(const LatticeConfig& cfg);
/// X# = -D_A X.
Field fundamental_vector(const LatticeConfig& cfg, const Field& X);

/// Symmetric part of div^T D_A over the links (a plain Laplacian for u1 or
/// A = 0). With a fixed boundary the endpoint rows and columns are removed.
Eigen::MatrixXd fp_operator(const LatticeConfig& cfg, Boundary b = Boundary::free);

struct ConnectionOptions {
    double cutoff = 1e-10;   // relative singular-value cutoff defining the kernel
    double guard = 0;        // retained singular values below guard*max are degenerate
    Boundary boundary = Boundary::free;
};

/// Least-squares functional connection: w(v) = argmin_X |v + D_A X|.
class CoulombConnection {
public:
    CoulombConnection(const LatticeConfig& cfg, const ConnectionOptions& opt = {});

    Field omega(const Field& v) const;
    Field vertical(const Field& v) const;
    Field horizontal(const Field& v) const;
    Eigen::MatrixXd vertical_projector() const;
    Eigen::MatrixXd horizontal_projector() const;
    /// Orthogonal projection of a gauge parameter off the kernel of D_A.
    Field kernel_complement(const Field& X) const;

    int kernel_dim() const { return kernel_dim_; }
    double smallest_singular_value() const { return sigma_min_; }
    double condition() const { return condition_; }

private:
    LatticeConfig cfg_;
    Eigen::MatrixXd select_;   // parameter coordinates -> site parameters
    Eigen::MatrixXd U_;        // retained left singular vectors
    Eigen::VectorXd inv_sigma_;
    Eigen::MatrixXd V_;        // retained right singular vectors
    int kernel_dim_ = 0;
    double sigma_min_ = 0;
    double condition_ = 0;
};

/// A_i -> Ad_g A_i - log(g_{i+1} g_i^-1)/dx on links, E_i -> Ad_{g_i} E_i.
LatticeConfig gauge_transform(const LatticeConfig& cfg, const GroupField& g);
/// Ad_g on a link-valued field (closing slot uses the last link's element).
Field Ad_links(const LatticeConfig& cfg, const GroupField& g, const Field& v);
Field Ad_sites(const LatticeConfig& cfg, const GroupField& g, const Field& X);
GroupField exp_field(const LatticeConfig& cfg, const Field& X, double t);

/// |w_{A'}(Ad_g v) - Ad_g w_A(v)| with A' the transform by g = exp(tX).
double equivariance_residual(const LatticeConfig& cfg, const Field& v, const Field& X,
                             double t, const ConnectionOptions& opt = {});

struct CurvatureResult {
    Field value;
    double norm = 0;
    double floor = 0;   // Richardson error estimate plus rounding
};

/// F(u,v) = -w([Hu, Hv]) with the vector-field bracket from central
/// differences at steps eps, eps/2, eps/4 and Richardson extrapolation.
CurvatureResult curvature_probe(const LatticeConfig& cfg, const Field& u, const Field& v,
                                double eps, const ConnectionOptions& opt = {});

double theta(const LatticeConfig& cfg, const Field& v);
double theta_H(const LatticeConfig& cfg, const Field& v, const ConnectionOptions& opt = {});
double corner_charge(const LatticeConfig& cfg, const Field& X);

struct ScanPoint {
    double t = 0;
    double lambda_min = 0;
    double condition = 0;
};

struct GribovReport {
    std::vector<ScanPoint> points;
    std::optional<std::pair<double, double>> bracket;
    std::optional<double> t_star;
};

/// Smallest eigenvalue of the FP operator off the constant modes (free
/// boundary) or on the interior sites (fixed boundary).
double fp_lambda_min(const LatticeConfig& cfg, Boundary b, double* condition = nullptr);
/// Tracks fp_lambda_min along A = t*A0, t in (0, t_max], and refines the
/// first sign change inside its bracket.
GribovReport gribov_scan(const LatticeConfig& A0, double t_max, int steps,
                         Boundary b = Boundary::free);

/// Smooth seeded fields: a few Fourier modes sampled at x_i = i dx, so the
/// same seed gives the same continuum field at every N.
using Rng = std::mt19937_64;
Field smooth_field(const Group& g, int N, Rng& rng, int modes = 4, double amplitude = 1.0);
/// Random connection with the closing slot equal to the last link, and a
/// random smooth E.
LatticeConfig random_config(const Group& g, int N, Rng& rng, double amplitude = 1.0);
/// Solves the discrete Gauss law D_A E = 0 from a random E_0.
void impose_gauss(LatticeConfig& cfg, Rng& rng);
/// Rescales to unit dx-weighted norm.
Field normalized(const LatticeConfig& cfg, Field f);

}  // namespace fsforms::lattice
