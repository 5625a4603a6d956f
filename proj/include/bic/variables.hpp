#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bic/error.hpp"

namespace bic {

/// Random variables of the broadcast interference channel model.
/// The declaration order is the canonical order used for printing,
/// tensor layout and lexicographic comparison of variable sets.
enum class Var : std::uint8_t { Q, U1, V1, V2, X1, U2, X2, Y1, Y2, Y3 };

inline constexpr std::size_t kNumVars = 10;

inline constexpr std::array<Var, kNumVars> kAllVars = {Var::Q,  Var::U1, Var::V1, Var::V2, Var::X1,
                                                       Var::U2, Var::X2, Var::Y1, Var::Y2, Var::Y3};

inline constexpr std::string_view var_name(Var v) {
  constexpr std::array<std::string_view, kNumVars> names = {"Q",  "U1", "V1", "V2", "X1",
                                                            "U2", "X2", "Y1", "Y2", "Y3"};
  return names[static_cast<std::size_t>(v)];
}

inline std::optional<Var> parse_var(std::string_view s) {
  for (Var v : kAllVars) {
    if (var_name(v) == s) return v;
  }
  return std::nullopt;
}

/// A set of model variables, stored as a bitmask.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<Var> vars) {
    for (Var v : vars) insert(v);
  }

  static constexpr VarSet from_bits(std::uint16_t bits) {
    VarSet s;
    s.bits_ = bits;
    return s;
  }

  constexpr std::uint16_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(Var v) const noexcept { return (bits_ >> static_cast<unsigned>(v)) & 1U; }
  constexpr void insert(Var v) noexcept { bits_ |= static_cast<std::uint16_t>(1U << static_cast<unsigned>(v)); }
  constexpr void erase(Var v) noexcept { bits_ &= static_cast<std::uint16_t>(~(1U << static_cast<unsigned>(v))); }

  constexpr bool subset_of(VarSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(VarSet other) const noexcept { return (bits_ & other.bits_) == 0; }

  friend constexpr VarSet operator|(VarSet a, VarSet b) noexcept { return from_bits(a.bits_ | b.bits_); }
  friend constexpr VarSet operator&(VarSet a, VarSet b) noexcept { return from_bits(a.bits_ & b.bits_); }
  friend constexpr VarSet operator-(VarSet a, VarSet b) noexcept {
    return from_bits(static_cast<std::uint16_t>(a.bits_ & ~b.bits_));
  }
  friend constexpr bool operator==(VarSet a, VarSet b) noexcept { return a.bits_ == b.bits_; }

  std::vector<Var> to_vector() const {
    std::vector<Var> out;
    for (Var v : kAllVars) {
      if (contains(v)) out.push_back(v);
    }
    return out;
  }

  /// Lexicographic order on the sorted element sequences.
  friend bool lex_less(VarSet a, VarSet b) {
    auto va = a.to_vector();
    auto vb = b.to_vector();
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
  }

  std::string to_string() const {
    std::string out;
    for (Var v : to_vector()) {
      if (!out.empty()) out += ',';
      out += var_name(v);
    }
    return out;
  }

  /// Parses a comma separated list such as "U1,V2". Empty input gives the empty set.
  static VarSet parse(std::string_view s) {
    VarSet out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t next = s.find(',', pos);
      if (next == std::string_view::npos) next = s.size();
      std::string_view tok = s.substr(pos, next - pos);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      if (!tok.empty()) {
        auto v = parse_var(tok);
        if (!v) throw UnknownVariable("unknown variable '" + std::string(tok) + "'");
        out.insert(*v);
      } else if (next != s.size() || pos != 0) {
        throw ParseError("empty variable name in '" + std::string(s) + "'");
      }
      pos = next + 1;
    }
    return out;
  }

 private:
  std::uint16_t bits_ = 0;
};

}  // namespace bic
