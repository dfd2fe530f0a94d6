#include "fsforms/core/atom.hpp"

#include <regex>

#include "fsforms/core/error.hpp"

namespace fsforms {

std::string_view to_string(Valuedness v) {
    switch (v) {
        case Valuedness::adjoint: return "adjoint";
        case Valuedness::group: return "group";
        case Valuedness::group_inverse: return "group-inverse";
        case Valuedness::scalar: return "scalar";
    }
    return "?";
}

Atom Registry::declare(std::string symbol, Bidegree bidegree, Valuedness kind,
                       bool field_independent) {
    static const std::regex ident("[A-Za-z][A-Za-z0-9_]*");
    if (!std::regex_match(symbol, ident))
        throw DeclarationError("invalid generator symbol '" + symbol + "'");
    if (index_.contains(symbol))
        throw DeclarationError("generator '" + symbol + "' already declared");
    if (bidegree.f < 0 || bidegree.s < 0)
        throw DeclarationError("negative bidegree for '" + symbol + "'");
    if (kind == Valuedness::group_inverse)
        throw DeclarationError("declare the group generator; '" + symbol +
                               "' inverse is implicit");
    if (kind == Valuedness::group && bidegree != Bidegree{0, 0})
        throw DeclarationError("group-valued generator '" + symbol +
                               "' must have bidegree (0,0)");
    auto id = static_cast<std::uint16_t>(generators_.size());
    generators_.push_back({symbol, bidegree, kind, field_independent});
    index_.emplace(std::move(symbol), id);
    return atom(id);
}

std::optional<Atom> Registry::find(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) return std::nullopt;
    return atom(it->second);
}

Atom Registry::atom(std::uint16_t id) const {
    const auto& g = generators_.at(id);
    return Atom{id, g.bidegree, g.kind, false, false};
}

Atom Registry::inverse(const Atom& group) const {
    if (group.kind != Valuedness::group)
        throw DeclarationError("'" + generator(group).symbol + "' is not group-valued");
    Atom inv = group.bare();
    inv.kind = Valuedness::group_inverse;
    return inv;
}

}  // namespace fsforms
