#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "bic/error.hpp"
#include "bic/joint_law.hpp"
#include "bic/variables.hpp"

namespace bic {

inline constexpr double kNegativityTol = 1e-10;

/// I(left; right | cond) in bits, kept in canonical form.
class MiAtom {
 public:
  MiAtom() = default;

  static MiAtom make(VarSet left, VarSet right, VarSet cond = {}) {
    if (left.empty() || right.empty()) throw ParseError("mutual information needs two nonempty arguments");
    if (!left.disjoint(right) || !left.disjoint(cond) || !right.disjoint(cond))
      throw ParseError("arguments of I(" + left.to_string() + ";" + right.to_string() + "|" +
                       cond.to_string() + ") overlap");
    MiAtom a;
    if (lex_less(right, left)) std::swap(left, right);
    a.left_ = left;
    a.right_ = right;
    a.cond_ = cond;
    return a;
  }

  /// Accepts "V1;Y1|U1,Q" with or without the surrounding "I(...)".
  static MiAtom parse(std::string_view s) {
    auto trim = [](std::string_view t) {
      while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
      while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
      return t;
    };
    s = trim(s);
    if (s.size() >= 3 && s.substr(0, 2) == "I(" && s.back() == ')') s = s.substr(2, s.size() - 3);
    const auto semi = s.find(';');
    if (semi == std::string_view::npos) throw ParseError("atom '" + std::string(s) + "' lacks ';'");
    const auto bar = s.find('|', semi);
    std::string_view l = s.substr(0, semi);
    std::string_view r = bar == std::string_view::npos ? s.substr(semi + 1) : s.substr(semi + 1, bar - semi - 1);
    std::string_view c = bar == std::string_view::npos ? std::string_view{} : s.substr(bar + 1);
    return make(VarSet::parse(trim(l)), VarSet::parse(trim(r)), VarSet::parse(trim(c)));
  }

  VarSet left() const noexcept { return left_; }
  VarSet right() const noexcept { return right_; }
  VarSet cond() const noexcept { return cond_; }
  VarSet vars() const noexcept { return left_ | right_ | cond_; }

  std::string to_string() const {
    std::string s = "I(" + left_.to_string() + ";" + right_.to_string();
    if (!cond_.empty()) s += "|" + cond_.to_string();
    return s + ")";
  }

  friend bool operator==(const MiAtom& a, const MiAtom& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.cond_ == b.cond_;
  }
  friend bool operator<(const MiAtom& a, const MiAtom& b) {
    return std::tuple(a.left_.bits(), a.right_.bits(), a.cond_.bits()) <
           std::tuple(b.left_.bits(), b.right_.bits(), b.cond_.bits());
  }

 private:
  VarSet left_, right_, cond_;
};

using AtomValuation = std::map<MiAtom, double>;

inline double entropy_of_pmf(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

inline double entropy(const JointLaw& j, VarSet vars) {
  if (vars.empty()) return 0.0;
  return entropy_of_pmf(marginalize(j, vars).probs);
}

/// Memoized marginal entropies of one joint law.
class EntropyCache {
 public:
  explicit EntropyCache(const JointLaw& j) : law_(j), present_(j.var_set()) {}

  double operator()(VarSet vars) {
    if (!vars.subset_of(present_))
      throw UnknownVariable("variables " + (vars - present_).to_string() + " not in joint law");
    auto it = cache_.find(vars.bits());
    if (it != cache_.end()) return it->second;
    const double h = entropy(law_, vars);
    cache_.emplace(vars.bits(), h);
    return h;
  }

  /// I(L;R|C) = H(L,C)+H(R,C)-H(L,R,C)-H(C), clamped at zero.
  double mutual_info(const MiAtom& a) {
    const VarSet l = a.left(), r = a.right(), c = a.cond();
    const double v = (*this)(l | c) + (*this)(r | c) - (*this)(l | r | c) - (*this)(c);
    if (v < -kNegativityTol)
      throw NegativityBeyondTolerance(a.to_string() + " evaluated to " + std::to_string(v));
    return v < 0.0 ? 0.0 : v;
  }

 private:
  const JointLaw& law_;
  VarSet present_;
  std::unordered_map<std::uint16_t, double> cache_;
};

inline double cond_mutual_info(const JointLaw& j, const MiAtom& a) {
  EntropyCache cache(j);
  return cache.mutual_info(a);
}

inline AtomValuation evaluate_atoms(const JointLaw& j, const std::vector<MiAtom>& atoms) {
  EntropyCache cache(j);
  AtomValuation out;
  for (const MiAtom& a : atoms) {
    if (!out.count(a)) out.emplace(a, cache.mutual_info(a));
  }
  return out;
}

/// Looks up an atom, throwing MissingAtom when absent.
inline double atom_value(const AtomValuation& v, const MiAtom& a) {
  auto it = v.find(a);
  if (it == v.end()) throw MissingAtom("valuation has no value for " + a.to_string());
  return it->second;
}

inline double atom_value(const AtomValuation& v, std::string_view atom) {
  return atom_value(v, MiAtom::parse(atom));
}

}  // namespace bic
