#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsforms/core/bidegree.hpp"

namespace fsforms {

enum class Valuedness : std::uint8_t { adjoint, group, group_inverse, scalar };

std::string_view to_string(Valuedness v);

/// A generator instance: a declared symbol, optionally hit once by the field
/// space differential and/or once by the spacetime differential. Group and
/// group-inverse atoms of the same symbol share `id`.
struct Atom {
    std::uint16_t id = 0;
    Bidegree base;
    Valuedness kind = Valuedness::adjoint;
    bool delta = false;
    bool d = false;

    Bidegree degree() const { return base + Bidegree{delta ? 1 : 0, d ? 1 : 0}; }
    bool is_matrix() const { return kind != Valuedness::scalar; }
    bool is_group_like() const {
        return kind == Valuedness::group || kind == Valuedness::group_inverse;
    }

    Atom with_delta() const {
        Atom a = *this;
        a.delta = true;
        return a;
    }
    Atom with_d() const {
        Atom a = *this;
        a.d = true;
        return a;
    }
    Atom bare() const {
        Atom a = *this;
        a.delta = a.d = false;
        return a;
    }

    // Ordering defines the lexicographic word order used by canonical forms.
    std::strong_ordering operator<=>(const Atom& o) const {
        if (auto c = id <=> o.id; c != 0) return c;
        if (auto c = kind <=> o.kind; c != 0) return c;
        if (auto c = delta <=> o.delta; c != 0) return c;
        return d <=> o.d;
    }
    bool operator==(const Atom& o) const { return (*this <=> o) == 0; }
};

struct Generator {
    std::string symbol;
    Bidegree bidegree;
    Valuedness kind = Valuedness::adjoint;
    bool field_independent = false;  // delta of this generator vanishes
};

/// Write-once table of declared generators.
class Registry {
public:
    Atom declare(std::string symbol, Bidegree bidegree, Valuedness kind,
                 bool field_independent = false);

    std::optional<Atom> find(std::string_view symbol) const;
    const Generator& generator(std::uint16_t id) const { return generators_.at(id); }
    const Generator& generator(const Atom& a) const { return generators_.at(a.id); }
    Atom atom(std::uint16_t id) const;
    /// The inverse of a group atom.
    Atom inverse(const Atom& group) const;
    std::size_t size() const { return generators_.size(); }
    const std::vector<Generator>& generators() const { return generators_; }

private:
    std::vector<Generator> generators_;
    std::unordered_map<std::string, std::uint16_t> index_;
};

}  // namespace fsforms
