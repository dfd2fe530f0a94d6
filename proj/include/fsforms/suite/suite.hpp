#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsforms/calculus/calculus.hpp"
#include "fsforms/core/error.hpp"
#include "fsforms/core/expression.hpp"

namespace fsforms::suite {

class UnknownSuiteError : public Error {
public:
    using Error::Error;
};

/// How both sides are reduced before comparison. `onshell` imposes the Gauss
/// constraint D_A E = 0, `flat` imposes vanishing field-space curvature.
enum class Mode { exact, onshell, flat };

std::string_view to_string(Mode m);

struct TheoremCase {
    std::string name;
    std::string lhs_source;
    std::string rhs_source;
    Mode mode = Mode::exact;
    std::string citation;
    std::size_t line = 0;
    double parse_ms = 0;   // the DSL evaluates operators while parsing
    Expression lhs;
    Expression rhs;
};

/// A parsed suite file. The theory is owned so that suite files may declare
/// extra generators.
struct Suite {
    std::string name;
    calculus::Theory theory = calculus::Theory::yang_mills();
    std::vector<TheoremCase> cases;
};

struct CaseResult {
    std::string name;
    bool pass = false;
    Mode mode = Mode::exact;
    std::string citation;
    std::string residual;        // empty when the case passes
    std::size_t residual_terms = 0;
    std::size_t lhs_terms = 0;
    std::size_t rhs_terms = 0;
    double wall_ms = 0;
};

struct Report {
    std::string suite;
    std::string timestamp;
    std::vector<CaseResult> cases;

    std::size_t passed() const;
    bool all_passed() const { return passed() == cases.size(); }
};

/// Parses suite text. Stanzas:
///
///   atom NAME (f,s) adjoint|scalar [field-independent]
///   define NAME = EXPR
///   case NAME
///     lhs: EXPR
///     rhs: EXPR
///     mode: exact|onshell|flat
///     cite: free text
///
/// '#' starts a comment. Errors carry the case name and file position.
Suite parse_suite(const std::string& name, const std::string& text);

/// Directory searched for `<name>.suite`; FSFORMS_SUITE_DIR overrides the
/// built-in location.
std::filesystem::path suite_directory();
std::vector<std::string> list_suites();
Suite load_suite(const std::string& name);

/// lhs - rhs after curvature expansion, the mode's substitutions, Stokes
/// back to the bulk and canonicalization. Zero iff the case holds.
Expression residual(const calculus::Theory& th, const Expression& lhs,
                    const Expression& rhs, Mode mode);

CaseResult run_case(const calculus::Theory& th, const TheoremCase& c);
/// Runs every case, on up to `jobs` threads; result order follows the file.
Report run_suite(const Suite& s, unsigned jobs = 1);

/// One copy of the case per canonical rhs term, with that term's sign
/// flipped.
std::vector<TheoremCase> sign_mutations(const TheoremCase& c);

nlohmann::json to_json(const Report& r);

}  // namespace fsforms::suite
