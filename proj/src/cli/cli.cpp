#include "fsforms/cli/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "fsforms/calculus/calculus.hpp"
#include "fsforms/lattice/experiments.hpp"
#include "fsforms/suite/suite.hpp"

namespace fsforms::cli {

namespace {

using nlohmann::json;

const char* kCsvHelp =
    "CSV columns: gribov t,lambda_min,condition; curvature sample,norm,floor; "
    "equivariance N,residual; corner N,theta,corner_charge,C";

json environment(unsigned jobs) {
    return {{"compiler", __VERSION__},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                          "." + std::to_string(EIGEN_MINOR_VERSION)},
#ifdef NDEBUG
            {"build", "release"},
#else
            {"build", "debug"},
#endif
            {"jobs", jobs}};
}

std::string timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw lattice::ConfigError("cannot write '" + path + "'");
    f << text;
}

std::string suite_text(const suite::Report& r) {
    std::ostringstream o;
    for (const auto& c : r.cases) {
        o << (c.pass ? "PASS " : "FAIL ") << c.name << "  [" << suite::to_string(c.mode) << ", "
          << c.lhs_terms << "/" << c.rhs_terms << " terms, " << std::fixed << std::setprecision(2)
          << c.wall_ms << " ms]\n";
        o.unsetf(std::ios::fixed);
        if (!c.pass) o << "  residual: " << c.residual << "\n";
    }
    o << r.suite << ": " << r.passed() << "/" << r.cases.size() << " pass\n";
    return o.str();
}

json lattice_json(const lattice::ExperimentResult& r, unsigned jobs) {
    const auto& s = r.settings;
    json cases = json::array();
    for (const auto& c : r.checks) {
        json j{{"name", c.name},
               {"verdict", c.pass ? "pass" : "fail"},
               {"value", c.value},
               {"bound", c.bound},
               {"citations", json::array()}};
        if (!c.note.empty()) j["citations"].push_back(c.note);
        cases.push_back(std::move(j));
    }
    json settings{{"group", s.group},
                  {"N", s.N},
                  {"boundary", s.boundary == lattice::Boundary::free ? "free" : "fixed"},
                  {"amplitude", s.amplitude},
                  {"cutoff", s.cutoff},
                  {"guard", s.guard},
                  {"tolerance", s.tolerance}};
    if (r.name == "equivariance") settings["t"] = s.t;
    if (r.name == "curvature") {
        settings["probe_N"] = s.probe_N;
        settings["samples"] = s.samples;
        settings["eps"] = s.eps;
        settings["probe_boundary"] = s.probe_boundary == lattice::Boundary::free ? "free" : "fixed";
    }
    if (r.name == "gribov") {
        settings["t_max"] = s.t_max;
        settings["steps"] = s.steps;
    }
    return {{"suite", "lattice-" + r.name},
            {"timestamp", timestamp()},
            {"seed", s.seed},
            {"settings", settings},
            {"summary", r.summary},
            {"passed", std::count_if(r.checks.begin(), r.checks.end(), [](auto& c) { return c.pass; })},
            {"total", r.checks.size()},
            {"cases", cases},
            {"environment", environment(jobs)}};
}

std::string lattice_text(const lattice::ExperimentResult& r) {
    std::ostringstream o;
    o << std::setprecision(6);
    for (const auto& c : r.checks)
        o << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value << " (bound " << c.bound
          << (c.note.empty() ? "" : ", " + c.note) << ")\n";
    o << r.name << " [" << r.settings.group << ", N=" << r.settings.N << ", seed=" << r.settings.seed
      << "]: " << r.summary << "\n";
    return o.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bigraded field-space calculus checker and lattice Yang-Mills experiments"};
    app.footer(kCsvHelp);
    app.require_subcommand(1);

    std::string format = "text", output, config, csv_path, name;
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    auto* verify = app.add_subcommand("verify", "Run a symbolic identity suite");
    verify->add_option("suite", name, "Suite name (see 'list')")->required();
    verify->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--output", output, "Write the report here instead of stdout");
    verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));

    auto* lat = app.add_subcommand("lattice", "Run a lattice experiment");
    lat->add_option("experiment", name, "projectors, equivariance, curvature, corner or gribov")->required();
    lat->add_option("--config", config, "key = value settings file")->required();
    lat->add_option("--format", format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    lat->add_option("--output", output, "Write the report (or CSV) here instead of stdout");
    lat->add_option("--csv", csv_path, "Also write the CSV table here");
    auto* seed_opt = lat->add_option("--seed", seed, "Override the configured seed");

    auto* list = app.add_subcommand("list", "List suites, experiments and generators");
    list->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*verify) {
            suite::Suite s = suite::load_suite(name);
            suite::Report r = suite::run_suite(s, jobs);
            if (format == "json") {
                json j = suite::to_json(r);
                j["environment"] = environment(jobs);
                emit(j.dump(2) + "\n", output, out);
            } else {
                emit(suite_text(r), output, out);
            }
            return r.all_passed() ? ok : failed;
        }
        if (*lat) {
            lattice::Settings s = lattice::load_settings(config);
            if (*seed_opt) s.seed = seed;
            lattice::ExperimentResult r = lattice::run_experiment(name, s);
            if (format == "json") emit(lattice_json(r, 1).dump(2) + "\n", output, out);
            else if (format == "csv") emit(r.csv(), output, out);
            else emit(lattice_text(r), output, out);
            if (!csv_path.empty()) emit(r.csv(), csv_path, out);
            return r.passed() ? ok : failed;
        }
        if (*list) {
            auto suites = suite::list_suites();
            const auto& experiments = lattice::experiment_names();
            calculus::Theory th = calculus::Theory::yang_mills();
            json atoms = json::array();
            for (const auto& g : th.registry.generators()) {
                std::string kind(to_string(g.kind));
                atoms.push_back({{"symbol", g.symbol},
                                 {"bidegree", {g.bidegree.f, g.bidegree.s}},
                                 {"valuedness", kind},
                                 {"field_independent", g.field_independent}});
            }
            if (format == "json") {
                out << json{{"suites", suites}, {"experiments", experiments}, {"atoms", atoms}}.dump(2)
                    << "\n";
            } else {
                out << "suites:\n";
                for (const auto& n : suites) out << "  " << n << "\n";
                out << "experiments:\n";
                for (const auto& n : experiments) out << "  " << n << "\n";
                out << "atoms:\n";
                for (const auto& a : atoms)
                    out << "  " << a["symbol"].get<std::string>() << " (" << a["bidegree"][0] << ","
                        << a["bidegree"][1] << ") " << a["valuedness"].get<std::string>()
                        << (a["field_independent"].get<bool>() ? " field-independent" : "") << "\n";
            }
            return ok;
        }
    } catch (const suite::UnknownSuiteError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const lattice::ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const ParseError& e) {
        err << "error: suite file: " << e.what() << "\n";
        return usage_error;
    } catch (const lattice::DegeneracyError& e) {
        err << "degenerate: " << e.what() << " (smallest singular value "
            << e.smallest_singular_value() << ")\n";
        return degenerate;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }
    return internal_error;
}

}  // namespace fsforms::cli
