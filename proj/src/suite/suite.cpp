#include "fsforms/suite/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "fsforms/dsl/dsl.hpp"

#ifndef FSFORMS_SUITE_DIR
#define FSFORMS_SUITE_DIR "suites"
#endif

namespace fsforms::suite {

using calculus::Theory;

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::exact: return "exact";
        case Mode::onshell: return "onshell";
        case Mode::flat: return "flat";
    }
    return "?";
}

std::size_t Report::passed() const {
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; }));
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool starts_with_word(const std::string& line, std::string_view w) {
    return line.size() > w.size() && line.compare(0, w.size(), w) == 0 &&
           (line[w.size()] == ' ' || line[w.size()] == '\t');
}

// An expression field: text plus where it starts in the file.
struct Field {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
    bool present = false;
};

struct Pending {
    std::string name;
    std::size_t line = 0;
    Field lhs, rhs, mode, cite;
};

Expression parse_field(const dsl::Context& ctx, const Field& f, const std::string& what,
                       const std::string& case_name) {
    try {
        return ctx.parse(f.text);
    } catch (const ParseError& e) {
        std::size_t line = f.line + e.line() - 1;
        std::size_t col = e.line() == 1 ? f.column + e.column() - 1 : e.column();
        throw ParseError((case_name.empty() ? what : "case '" + case_name + "' " + what) +
                             ": " + e.message(),
                         line, col);
    } catch (const Error& e) {
        throw ParseError((case_name.empty() ? what : "case '" + case_name + "' " + what) +
                             ": " + e.what(),
                         f.line, f.column);
    }
}

Bidegree parse_bidegree(const std::string& s, std::size_t line) {
    int f = 0, sdeg = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream in(s);
    if (!(in >> c1 >> f >> c2 >> sdeg >> c3) || c1 != '(' || c2 != ',' || c3 != ')' || f < 0 ||
        sdeg < 0)
        throw ParseError("malformed bidegree '" + s + "'", line, 1);
    return {f, sdeg};
}

}  // namespace

Suite parse_suite(const std::string& name, const std::string& text) {
    Suite suite;
    suite.name = name;
    dsl::Context ctx(suite.theory);

    std::vector<Pending> pending;
    Field* open = nullptr;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::string line = trim(body);
        if (line.empty()) continue;
        std::size_t indent = body.find_first_not_of(" \t") + 1;

        if (starts_with_word(line, "atom")) {
            open = nullptr;
            std::istringstream words(line.substr(4));
            std::string sym, deg, kind, flag;
            words >> sym >> deg >> kind >> flag;
            Valuedness v;
            if (kind == "adjoint") v = Valuedness::adjoint;
            else if (kind == "scalar") v = Valuedness::scalar;
            else if (kind == "group") v = Valuedness::group;
            else throw ParseError("unknown valuedness '" + kind + "'", lineno, indent);
            if (!flag.empty() && flag != "field-independent")
                throw ParseError("unknown atom flag '" + flag + "'", lineno, indent);
            try {
                suite.theory.registry.declare(sym, parse_bidegree(deg, lineno), v,
                                              flag == "field-independent");
            } catch (const DeclarationError& e) {
                throw ParseError(e.what(), lineno, indent);
            }
            continue;
        }
        if (starts_with_word(line, "define")) {
            open = nullptr;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("define without '='", lineno, indent);
            std::string macro = trim(std::string_view(line).substr(6, eq - 6));
            Field f{line.substr(eq + 1), lineno, indent + eq + 1, true};
            ctx.define(macro, parse_field(ctx, f, "define " + macro, ""));
            continue;
        }
        if (starts_with_word(line, "case")) {
            open = nullptr;
            pending.push_back({trim(line.substr(4)), lineno, {}, {}, {}, {}});
            continue;
        }
        auto colon = line.find(':');
        std::string key = colon == std::string::npos ? "" : line.substr(0, colon);
        if (key == "lhs" || key == "rhs" || key == "mode" || key == "cite") {
            if (pending.empty()) throw ParseError("'" + key + "' outside a case", lineno, indent);
            Pending& p = pending.back();
            Field& f = key == "lhs" ? p.lhs : key == "rhs" ? p.rhs : key == "mode" ? p.mode : p.cite;
            if (f.present)
                throw ParseError("duplicate '" + key + "' in case '" + p.name + "'", lineno, indent);
            f = {line.substr(colon + 1), lineno, indent + colon + 1, true};
            open = &f;
            continue;
        }
        if (!open) throw ParseError("unexpected line '" + line + "'", lineno, indent);
        open->text += "\n" + line;
    }

    for (auto& p : pending) {
        if (!p.lhs.present || !p.rhs.present)
            throw ParseError("case '" + p.name + "' needs lhs and rhs", p.line, 1);
        TheoremCase c;
        c.name = p.name;
        c.line = p.line;
        c.lhs_source = trim(p.lhs.text);
        c.rhs_source = trim(p.rhs.text);
        c.citation = trim(p.cite.text);
        std::string mode = p.mode.present ? trim(p.mode.text) : "exact";
        if (mode == "exact") c.mode = Mode::exact;
        else if (mode == "onshell") c.mode = Mode::onshell;
        else if (mode == "flat") c.mode = Mode::flat;
        else throw ParseError("case '" + p.name + "': unknown mode '" + mode + "'", p.mode.line, 1);
        auto t0 = std::chrono::steady_clock::now();
        c.lhs = parse_field(ctx, p.lhs, "lhs", p.name);
        c.rhs = parse_field(ctx, p.rhs, "rhs", p.name);
        c.parse_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (!c.lhs.is_zero() && !c.rhs.is_zero() &&
            (c.lhs.degree() != c.rhs.degree() || c.lhs.adjoint() != c.rhs.adjoint()))
            throw ParseError("case '" + p.name + "': sides differ in bidegree or valuedness",
                             p.line, 1);
        suite.cases.push_back(std::move(c));
    }
    return suite;
}

std::filesystem::path suite_directory() {
    if (const char* env = std::getenv("FSFORMS_SUITE_DIR"); env && *env) return env;
    return FSFORMS_SUITE_DIR;
}

std::vector<std::string> list_suites() {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(suite_directory(), ec))
        if (entry.path().extension() == ".suite") names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

Suite load_suite(const std::string& name) {
    auto path = suite_directory() / (name + ".suite");
    std::ifstream in(path);
    if (name.empty() || name.find('/') != std::string::npos || !in)
        throw UnknownSuiteError("unknown suite '" + name + "' (looked in " +
                                suite_directory().string() + ")");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_suite(name, buf.str());
}

Expression residual(const Theory& th, const Expression& lhs, const Expression& rhs, Mode mode) {
    Expression diff = lhs - rhs;
    if (mode == Mode::flat) diff = calculus::flat_reduce(th, diff);
    diff = calculus::expand_curvature(th, diff);
    diff = calculus::to_bulk(th, diff);
    if (mode == Mode::onshell) diff = calculus::onshell_reduce(th, diff);
    return canonicalize(diff);
}

CaseResult run_case(const Theory& th, const TheoremCase& c) {
    auto t0 = std::chrono::steady_clock::now();
    CaseResult r;
    r.name = c.name;
    r.mode = c.mode;
    r.citation = c.citation;
    r.lhs_terms = c.lhs.size();
    r.rhs_terms = c.rhs.size();
    try {
        Expression res = residual(th, c.lhs, c.rhs, c.mode);
        r.pass = res.is_zero();
        r.residual_terms = res.size();
        if (!r.pass) r.residual = dsl::print(th.registry, res);
    } catch (const Error& e) {
        throw Error("case '" + c.name + "': " + e.what());
    }
    r.wall_ms = c.parse_ms +
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Report run_suite(const Suite& s, unsigned jobs) {
    Report report;
    report.suite = s.name;
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    report.timestamp = buf;

    report.cases.resize(s.cases.size());
    std::vector<std::string> errors(s.cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < s.cases.size();) {
            try {
                report.cases[i] = run_case(s.theory, s.cases[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    jobs = std::clamp<unsigned>(jobs, 1, std::max<std::size_t>(1, s.cases.size()));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    return report;
}

std::vector<TheoremCase> sign_mutations(const TheoremCase& c) {
    std::vector<TheoremCase> out;
    std::size_t k = 0;
    for (const auto& [m, coeff] : c.rhs.terms()) {
        TheoremCase mutant = c;
        mutant.name = c.name + "~" + std::to_string(k++);
        mutant.rhs = c.rhs - Expression::from_monomial(m, Rational(2) * coeff);
        out.push_back(std::move(mutant));
    }
    return out;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : r.cases) {
        nlohmann::json j{{"name", c.name},
                         {"verdict", c.pass ? "pass" : "fail"},
                         {"mode", std::string(to_string(c.mode))},
                         {"citations", nlohmann::json::array({c.citation})},
                         {"terms", {{"lhs", c.lhs_terms}, {"rhs", c.rhs_terms}, {"residual", c.residual_terms}}},
                         {"wall_ms", c.wall_ms}};
        if (!c.pass) j["residual"] = c.residual;
        cases.push_back(std::move(j));
    }
    return {{"suite", r.suite},
            {"timestamp", r.timestamp},
            {"passed", r.passed()},
            {"total", r.cases.size()},
            {"cases", std::move(cases)}};
}

}  // namespace fsforms::suite
