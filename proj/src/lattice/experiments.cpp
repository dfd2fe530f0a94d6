#include "fsforms/lattice/experiments.hpp"

#include <algorithm>
#include <boost/program_options.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fsforms::lattice {

namespace po = boost::program_options;

namespace {

Boundary parse_boundary(const std::string& s) {
    if (s == "free") return Boundary::free;
    if (s == "fixed") return Boundary::fixed;
    throw ConfigError("boundary must be 'free' or 'fixed', got '" + s + "'");
}

std::string fmt(double x) {
    std::ostringstream o;
    o << std::setprecision(6) << x;
    return o.str();
}

Check bound_check(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value <= bound, ""};
}

}  // namespace

Settings parse_settings(std::istream& in) {
    Settings s;
    std::string boundary = "free", probe_boundary = "fixed";
    po::options_description d;
    d.add_options()
        ("group", po::value(&s.group))
        ("N", po::value(&s.N))
        ("seed", po::value(&s.seed))
        ("amplitude", po::value(&s.amplitude))
        ("boundary", po::value(&boundary))
        ("cutoff", po::value(&s.cutoff))
        ("guard", po::value(&s.guard))
        ("tolerance", po::value(&s.tolerance))
        ("t", po::value(&s.t))
        ("equivariance_tolerance", po::value(&s.equivariance_tolerance))
        ("probe_N", po::value(&s.probe_N))
        ("samples", po::value(&s.samples))
        ("eps", po::value(&s.eps))
        ("probe_boundary", po::value(&probe_boundary))
        ("pass_fraction", po::value(&s.pass_fraction))
        ("corner_spread", po::value(&s.corner_spread))
        ("t_max", po::value(&s.t_max))
        ("steps", po::value(&s.steps))
        ("refine", po::value(&s.refine))
        ("refine_tolerance", po::value(&s.refine_tolerance));
    try {
        po::variables_map vm;
        po::store(po::parse_config_file(in, d, false), vm);
        po::notify(vm);
    } catch (const po::error& e) {
        throw ConfigError(e.what());
    }
    s.boundary = parse_boundary(boundary);
    s.probe_boundary = parse_boundary(probe_boundary);
    if (s.group != "u1" && s.group != "su2") throw ConfigError("group must be u1 or su2");
    if (s.N < 8 || s.probe_N < 8) throw ConfigError("N and probe_N must be at least 8");
    if (s.steps <= 0 || s.samples <= 0) throw ConfigError("steps and samples must be positive");
    if (!(s.eps > 0) || !(s.t_max > 0)) throw ConfigError("eps and t_max must be positive");
    return s;
}

Settings load_settings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_settings(in);
}

bool ExperimentResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string ExperimentResult::csv() const {
    std::ostringstream o;
    for (std::size_t i = 0; i < csv_header.size(); ++i) o << (i ? "," : "") << csv_header[i];
    o << "\n" << std::setprecision(17);
    for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
        o << "\n";
    }
    return o.str();
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"projectors", "equivariance", "curvature", "corner",
                                                "gribov"};
    return names;
}

namespace {

ExperimentResult projectors(const Settings& s) {
    ExperimentResult r;
    Group g = Group::parse(s.group);
    Rng rng(s.seed);
    LatticeConfig cfg = random_config(g, s.N, rng, s.amplitude);
    CoulombConnection w(cfg, s.connection(s.boundary));
    Eigen::MatrixXd V = w.vertical_projector(), H = w.horizontal_projector();
    Field X = w.kernel_complement(normalized(cfg, smooth_field(g, s.N, rng)));
    Field v = normalized(cfg, smooth_field(g, s.N, rng));
    r.checks.push_back(bound_check("|V^2 - V|", (V * V - V).norm(), s.tolerance));
    r.checks.push_back(bound_check("|H^2 - H|", (H * H - H).norm(), s.tolerance));
    r.checks.push_back(bound_check("|w(X#) - X|", norm(cfg, w.omega(fundamental_vector(cfg, X)) - X), s.tolerance));
    r.checks.push_back(bound_check("|w(Hv)|", norm(cfg, w.omega(w.horizontal(v))), s.tolerance));
    r.summary = "kernel dim " + std::to_string(w.kernel_dim()) + ", condition " + fmt(w.condition());
    return r;
}

ExperimentResult equivariance(const Settings& s) {
    ExperimentResult r;
    Group g = Group::parse(s.group);
    r.csv_header = {"N", "residual"};
    std::vector<double> res;
    for (int N : {s.N, 2 * s.N}) {
        Rng rng(s.seed);
        LatticeConfig cfg = random_config(g, N, rng, s.amplitude);
        Field v = normalized(cfg, smooth_field(g, N, rng));
        Field X = normalized(cfg, smooth_field(g, N, rng));
        res.push_back(equivariance_residual(cfg, v, X, s.t, s.connection(s.boundary)));
        r.csv_rows.push_back({double(N), res.back()});
    }
    r.checks.push_back(bound_check("residual at 2N", res[1], s.equivariance_tolerance));
    if (g.kind() == GroupKind::su2) {
        double ratio = res[0] / res[1];
        r.checks.push_back({"halving ratio", ratio, 2.0, std::abs(ratio - 2) <= 0.4, "expected 2 +- 20%"});
    } else {
        r.checks.push_back(bound_check("abelian residual", res[1], s.tolerance));
    }
    r.summary = "residual " + fmt(res[0]) + " at N=" + std::to_string(s.N) + ", " + fmt(res[1]) +
                " at N=" + std::to_string(2 * s.N);
    return r;
}

ExperimentResult curvature(const Settings& s) {
    ExperimentResult r;
    Group g = Group::parse(s.group);
    r.csv_header = {"sample", "norm", "floor"};
    int separated = 0, below = 0;
    for (int k = 0; k < s.samples; ++k) {
        Rng rng(s.seed + std::uint64_t(k));
        LatticeConfig cfg = random_config(g, s.probe_N, rng, s.amplitude);
        Field u = smooth_field(g, s.probe_N, rng), v = smooth_field(g, s.probe_N, rng);
        CurvatureResult c = curvature_probe(cfg, u, v, s.eps, s.connection(s.probe_boundary));
        separated += c.norm >= 10 * c.floor;
        below += c.norm <= c.floor;
        r.csv_rows.push_back({double(k), c.norm, c.floor});
    }
    double n = s.samples;
    if (g.kind() == GroupKind::u1)
        r.checks.push_back({"fraction with norm <= floor", below / n, 1.0, below == s.samples, "flat"});
    else
        r.checks.push_back({"fraction with norm >= 10 floor", separated / n, s.pass_fraction,
                            separated / n >= s.pass_fraction, "curved"});
    r.summary = std::to_string(separated) + "/" + std::to_string(s.samples) +
                " probes above 10x floor, " + std::to_string(below) + " at or below floor";
    return r;
}

ExperimentResult corner(const Settings& s) {
    ExperimentResult r;
    Group g = Group::parse(s.group);
    r.csv_header = {"N", "theta", "corner_charge", "C"};
    std::vector<double> C;
    double worst_H = 0;
    for (int N : {s.N, 2 * s.N, 4 * s.N}) {
        Rng rng(s.seed);
        LatticeConfig cfg = random_config(g, N, rng, s.amplitude);
        impose_gauss(cfg, rng);
        Field X = smooth_field(g, N, rng);
        Field Xs = fundamental_vector(cfg, X);
        double th = theta(cfg, Xs), q = corner_charge(cfg, X);
        C.push_back(std::abs(th + q) / cfg.dx);
        r.csv_rows.push_back({double(N), th, q, C.back()});
        if (N == s.N) worst_H = std::abs(theta_H(cfg, Xs, s.connection(s.boundary)));
    }
    double lo = *std::min_element(C.begin(), C.end()), hi = *std::max_element(C.begin(), C.end());
    double spread = lo > 0 ? hi / lo - 1 : INFINITY;
    r.checks.push_back(bound_check("spread of C across N, 2N, 4N", spread, s.corner_spread));
    r.checks.push_back(bound_check("|theta_H(X#)|", worst_H, s.tolerance));
    r.summary = "|theta(X#) + corner| / dx = " + fmt(C[0]) + ", " + fmt(C[1]) + ", " + fmt(C[2]);
    return r;
}

ExperimentResult gribov(const Settings& s) {
    ExperimentResult r;
    Group g = Group::parse(s.group);
    Rng rng(s.seed);
    LatticeConfig cfg = random_config(g, s.N, rng, s.amplitude);
    GribovReport rep = gribov_scan(cfg, s.t_max, s.steps, s.boundary);
    r.csv_header = {"t", "lambda_min", "condition"};
    for (const auto& p : rep.points) r.csv_rows.push_back({p.t, p.lambda_min, p.condition});
    if (g.kind() == GroupKind::u1) {
        r.checks.push_back({"no crossing", 0, 0, !rep.t_star, ""});
        r.summary = rep.t_star ? "crossing at t* = " + fmt(*rep.t_star) : "no crossing";
        return r;
    }
    r.checks.push_back({"crossing found", rep.t_star ? *rep.t_star : 0, s.t_max, bool(rep.t_star), ""});
    if (!rep.t_star) {
        r.summary = "no crossing";
        return r;
    }
    r.summary = "crossing in [" + fmt(rep.bracket->first) + ", " + fmt(rep.bracket->second) +
                "], t* = " + fmt(*rep.t_star);
    if (s.refine) {
        Rng rng2(s.seed);
        LatticeConfig fine = random_config(g, 2 * s.N, rng2, s.amplitude);
        GribovReport rep2 = gribov_scan(fine, s.t_max, s.steps, s.boundary);
        double rel = rep2.t_star ? std::abs(*rep2.t_star - *rep.t_star) / *rep.t_star : INFINITY;
        r.checks.push_back(bound_check("relative t* change at 2N", rel, s.refine_tolerance));
        r.summary += "; at N=" + std::to_string(2 * s.N) + " t* = " +
                     (rep2.t_star ? fmt(*rep2.t_star) : std::string("none"));
    }
    return r;
}

}  // namespace

ExperimentResult run_experiment(const std::string& name, const Settings& s) {
    ExperimentResult r;
    if (name == "projectors") r = projectors(s);
    else if (name == "equivariance") r = equivariance(s);
    else if (name == "curvature") r = curvature(s);
    else if (name == "corner") r = corner(s);
    else if (name == "gribov") r = gribov(s);
    else throw ConfigError("unknown experiment '" + name + "'");
    r.name = name;
    r.settings = s;
    return r;
}

}  // namespace fsforms::lattice
