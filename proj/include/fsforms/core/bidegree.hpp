#pragma once

#include <compare>
#include <ostream>

namespace fsforms {

/// Joint grading of a form: field-space degree `f` (ghost number) and
/// spacetime degree `s`.
struct Bidegree {
    int f = 0;
    int s = 0;

    constexpr Bidegree operator+(Bidegree o) const { return {f + o.f, s + o.s}; }
    constexpr Bidegree operator-(Bidegree o) const { return {f - o.f, s - o.s}; }
    constexpr auto operator<=>(const Bidegree&) const = default;
};

/// Parity of the sign picked up when permuting two homogeneous forms,
/// (-1)^(f1 f2 + s1 s2).
constexpr int koszul(Bidegree a, Bidegree b) { return (a.f * b.f + a.s * b.s) & 1; }

constexpr int koszul_sign(Bidegree a, Bidegree b) { return koszul(a, b) ? -1 : 1; }

/// A form is odd when it anticommutes with itself.
constexpr bool is_odd(Bidegree a) { return koszul(a, a) != 0; }

inline std::ostream& operator<<(std::ostream& os, Bidegree b) {
    return os << '(' << b.f << ',' << b.s << ')';
}

}  // namespace fsforms
