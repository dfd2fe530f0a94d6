#pragma once

#include <map>
#include <string>
#include <string_view>

#include "fsforms/calculus/calculus.hpp"
#include "fsforms/core/expression.hpp"

namespace fsforms::dsl {

/// Parsing context: the theory whose generators may be referenced and a set
/// of named expressions (macros) that identifiers resolve to first.
///
/// Grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := rational ['*'] factor ('*' factor)* | rational | factor ('*' factor)*
///   factor := ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | 'id'
/// Keywords taking arguments: delta d D s vert dH deltaV bracket tr intS intC
/// intM onshell stokes expand flat iota(X, e) gauge(b, e) inv(b).
class Context {
public:
    explicit Context(const calculus::Theory& theory) : theory_(&theory) {}

    void define(const std::string& name, Expression value);
    const std::map<std::string, Expression>& macros() const { return macros_; }
    const calculus::Theory& theory() const { return *theory_; }

    Expression parse(std::string_view text) const;

private:
    const calculus::Theory* theory_;
    std::map<std::string, Expression> macros_;
};

/// Renders an expression in the DSL; parse(print(e)) reproduces e.
std::string print(const Registry& registry, const Expression& e);
std::string print(const Registry& registry, const Monomial& m);

}  // namespace fsforms::dsl
