#include <cctype>
#include <charconv>
#include <functional>
#include <string>
#include <vector>

#include "fsforms/core/error.hpp"
#include "fsforms/dsl/dsl.hpp"

namespace fsforms::dsl {

void Context::define(const std::string& name, Expression value) {
    if (theory_->registry.find(name))
        throw DeclarationError("macro '" + name + "' shadows a generator");
    macros_[name] = std::move(value);
}

namespace {

using namespace fsforms::calculus;

struct Token {
    enum Kind { ident, number, punct, end } kind;
    std::string text;
    std::size_t line, column;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        unsigned char ch = static_cast<unsigned char>(src[i]);
        if (std::isspace(ch)) {
            advance(1);
            continue;
        }
        std::size_t l = line, c = col, start = i;
        if (std::isalpha(ch)) {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            advance(j - i);
            out.push_back({Token::ident, std::string(src.substr(start, j - start)), l, c});
        } else if (std::isdigit(ch)) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            advance(j - i);
            out.push_back({Token::number, std::string(src.substr(start, j - start)), l, c});
        } else if (std::string_view("+-*/(),").find(static_cast<char>(ch)) != std::string_view::npos) {
            advance(1);
            out.push_back({Token::punct, std::string(1, static_cast<char>(ch)), l, c});
        } else {
            throw ParseError(std::string("unexpected character '") + static_cast<char>(ch) + "'", l, c);
        }
    }
    out.push_back({Token::end, "", line, col});
    return out;
}

class Parser {
public:
    Parser(const Context& ctx, std::vector<Token> tokens) : ctx_(ctx), th_(ctx.theory()), toks_(std::move(tokens)) {}

    Expression parse_all() {
        Expression e = expr();
        if (peek().kind != Token::end) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool is_punct(const char* p) const { return peek().kind == Token::punct && peek().text == p; }
    Token take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek()); }
    [[noreturn]] void fail_at(const std::string& msg, const Token& t) const {
        throw ParseError(msg, t.line, t.column);
    }
    void expect(const char* p) {
        if (!is_punct(p)) fail(std::string("expected '") + p + "'");
        take();
    }

    // Runs an algebra operation, reporting failures at `at`.
    template <class F>
    Expression guarded(const Token& at, F&& f) {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            fail_at(e.what(), at);
        }
    }

    Expression expr() {
        Rational sign = 1;
        if (is_punct("+") || is_punct("-")) sign = take().text == "-" ? -1 : 1;
        Expression acc = term();
        acc *= sign;
        while (is_punct("+") || is_punct("-")) {
            Token op = take();
            Expression rhs = term();
            acc = guarded(op, [&] { return op.text == "+" ? acc + rhs : acc - rhs; });
        }
        return acc;
    }

    std::int64_t integer(const Token& t) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) fail_at("integer out of range", t);
        return v;
    }

    Expression term() {
        std::optional<Rational> coeff;
        if (peek().kind == Token::number) {
            Token num = take();
            Rational c = integer(num);
            if (is_punct("/")) {
                take();
                if (peek().kind != Token::number) fail("expected denominator");
                Token den = take();
                if (integer(den) == std::int64_t{0}) fail_at("zero denominator", den);
                c /= integer(den);
            }
            coeff = c;
            if (is_punct("*")) take();
            else if (!starts_factor()) return Expression::constant(c);
        }
        Token first = peek();
        Expression acc = factor();
        while (is_punct("*")) {
            Token op = take();
            Expression rhs = factor();
            acc = guarded(op, [&] { return mul(acc, rhs); });
        }
        if (coeff) acc *= *coeff;
        return acc;
    }

    bool starts_factor() const {
        return peek().kind == Token::ident || is_punct("(");
    }

    std::vector<Expression> args(std::size_t n, const Token& name) {
        expect("(");
        std::vector<Expression> out;
        for (std::size_t i = 0; i < n; ++i) {
            if (i) expect(",");
            out.push_back(expr());
        }
        if (!is_punct(")")) fail("'" + name.text + "' takes " + std::to_string(n) + " argument(s)");
        take();
        return out;
    }

    Atom atom_arg() {
        expect("(");
        if (peek().kind != Token::ident) fail("expected a generator name");
        Token t = take();
        auto a = th_.registry.find(t.text);
        if (!a) fail_at("undeclared atom '" + t.text + "'", t);
        return *a;
    }

    Expression factor() {
        if (is_punct("(")) {
            take();
            Expression e = expr();
            expect(")");
            return e;
        }
        if (peek().kind != Token::ident) fail("expected a factor");
        Token name = take();
        const std::string& n = name.text;
        if (is_punct("(")) return call(name);
        if (n == "id") return Expression::identity();
        if (auto it = ctx_.macros().find(n); it != ctx_.macros().end()) return it->second;
        auto a = th_.registry.find(n);
        if (!a) fail_at("undeclared atom '" + n + "'", name);
        return Expression::atom(*a);
    }

    Expression call(const Token& name) {
        const std::string& n = name.text;
        static const std::map<std::string, std::function<Expression(const Theory&, const Expression&)>> unary = {
            {"delta", delta},
            {"d", d},
            {"D", covariant_D},
            {"s", brst_s},
            {"vert", vertical},
            {"dH", delta_H},
            {"deltaV", delta_group},
            {"onshell", onshell_reduce},
            {"stokes", stokes},
            {"expand", expand_curvature},
            {"flat", flat_reduce},
            {"tr", [](const Theory&, const Expression& e) { return trace(e); }},
            {"intS", [](const Theory&, const Expression& e) { return integrate(e, Domain::slice); }},
            {"intC", [](const Theory&, const Expression& e) { return integrate(e, Domain::corner); }},
            {"intM", [](const Theory&, const Expression& e) { return integrate(e, Domain::spacetime); }},
        };
        if (auto it = unary.find(n); it != unary.end()) {
            auto a = args(1, name);
            return guarded(name, [&] { return it->second(th_, a[0]); });
        }
        if (n == "bracket") {
            auto a = args(2, name);
            return guarded(name, [&] { return bracket(a[0], a[1]); });
        }
        if (n == "inv") {
            Atom g = atom_arg();
            expect(")");
            return guarded(name, [&] { return Expression::atom(th_.registry.inverse(g)); });
        }
        if (n == "iota" || n == "gauge") {
            Atom a = atom_arg();
            expect(",");
            Expression e = expr();
            expect(")");
            return guarded(name, [&] {
                return n == "iota" ? contract_fundamental(th_, a, e) : gauge_substitute(th_, a, e);
            });
        }
        fail_at("unknown operator '" + n + "'", name);
    }

    const Context& ctx_;
    const Theory& th_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Context::parse(std::string_view text) const {
    return Parser(*this, lex(text)).parse_all();
}

}  // namespace fsforms::dsl
