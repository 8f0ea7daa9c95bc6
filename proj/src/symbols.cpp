#include "iwave/symbols.hpp"

#include <array>
#include <utility>

namespace iwave {

namespace {

constexpr std::array<std::pair<SymbolId, std::string_view>, 14> kNames{{
    {SymbolId::T, "T"},
    {SymbolId::I, "I"},
    {SymbolId::t, "t"},
    {SymbolId::k, "k"},
    {SymbolId::sqrt_k, "sqrt_k"},
    {SymbolId::sqrt_t, "sqrt_t"},
    {SymbolId::t_inv_half, "t_inv_half"},
    {SymbolId::G0, "G0"},
    {SymbolId::Gp0, "Gp0"},
    {SymbolId::Gm0, "Gm0"},
    {SymbolId::L_ilw, "L_ilw"},
    {SymbolId::lin_bo, "lin_bo"},
    {SymbolId::lin_benjamin, "lin_benjamin"},
    {SymbolId::P_frak, "P_frak"},
}};

}  // namespace

SymbolId symbol_from_name(std::string_view name) {
  for (const auto& [id, n] : kNames) {
    if (n == name) return id;
  }
  throw Error("unknown symbol tag '" + std::string(name) + "'");
}

std::string_view symbol_name(SymbolId id) {
  for (const auto& [i, n] : kNames) {
    if (i == id) return n;
  }
  throw Error("unknown symbol id");
}

}  // namespace iwave
