#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "fsforms/lattice/lattice.hpp"

namespace fsforms::lattice {

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Key = value settings shared by all lattice experiments.
struct Settings {
    std::string group = "su2";
    int N = 128;
    std::uint64_t seed = 42;
    double amplitude = 1.0;     // scale of the sampled connection
    Boundary boundary = Boundary::free;
    double cutoff = 1e-10;
    double guard = 0;
    double tolerance = 1e-8;    // bound for quantities that vanish exactly
    // equivariance
    double t = 0.3;
    double equivariance_tolerance = 1e-3;
    // curvature
    int probe_N = 32;
    int samples = 100;
    double eps = 1e-2;
    Boundary probe_boundary = Boundary::fixed;
    double pass_fraction = 0.95;
    // corner
    double corner_spread = 0.3;
    // gribov
    double t_max = 10;
    int steps = 40;
    bool refine = true;         // repeat the scan at 2N and compare t*
    double refine_tolerance = 0.05;

    ConnectionOptions connection(Boundary b) const { return {cutoff, guard, b}; }
};

Settings parse_settings(std::istream& in);
Settings load_settings(const std::string& path);

struct Check {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;
    std::string note;
};

struct ExperimentResult {
    std::string name;
    Settings settings;
    std::vector<Check> checks;
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;
    std::string summary;

    bool passed() const;
    std::string csv() const;
};

const std::vector<std::string>& experiment_names();
/// Runs a named experiment; throws ConfigError for an unknown name and
/// DegeneracyError when a connection cannot be built.
ExperimentResult run_experiment(const std::string& name, const Settings& s);

}  // namespace fsforms::lattice
