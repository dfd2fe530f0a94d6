#include <sstream>

#include "fsforms/dsl/dsl.hpp"

namespace fsforms::dsl {

namespace {

std::string atom_text(const Registry& reg, const Atom& a) {
    std::string s = reg.generator(a).symbol;
    if (a.kind == Valuedness::group_inverse) s = "inv(" + s + ")";
    if (a.delta) s = "delta(" + s + ")";
    if (a.d) s = "d(" + s + ")";
    return s;
}

std::string join(const Registry& reg, const std::vector<Atom>& atoms) {
    std::string out;
    for (const auto& a : atoms) {
        if (!out.empty()) out += "*";
        out += atom_text(reg, a);
    }
    return out;
}

std::string rational_text(Rational r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

}  // namespace

std::string print(const Registry& reg, const Monomial& m) {
    std::string body = join(reg, m.scalars);
    std::string word;
    switch (m.kind) {
        case WordKind::open: word = m.word.empty() ? "id" : join(reg, m.word); break;
        case WordKind::traced: word = "tr(" + (m.word.empty() ? "id" : join(reg, m.word)) + ")"; break;
        case WordKind::scalar: break;
    }
    if (!word.empty()) body += (body.empty() ? "" : "*") + word;
    if (body.empty()) body = "1";
    switch (m.domain) {
        case Domain::slice: return "intS(" + body + ")";
        case Domain::corner: return "intC(" + body + ")";
        case Domain::spacetime: return "intM(" + body + ")";
        case Domain::none: break;
    }
    return body;
}

std::string print(const Registry& reg, const Expression& e) {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : e.terms()) {
        Rational mag = c < Rational(0) ? -c : c;
        if (out.empty()) {
            if (c < Rational(0)) out += "-";
        } else {
            out += c < Rational(0) ? " - " : " + ";
        }
        std::string body = print(reg, m);
        bool bare_constant = m.kind == WordKind::scalar && m.scalars.empty() &&
                             m.domain == Domain::none;
        if (bare_constant)
            out += rational_text(mag);
        else if (mag != Rational(1))
            out += rational_text(mag) + "*" + body;
        else
            out += body;
    }
    return out;
}

}  // namespace fsforms::dsl
