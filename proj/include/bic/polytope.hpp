#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bic/error.hpp"
#include "bic/info_measures.hpp"
#include "bic/rational.hpp"
#include "bic/simplex.hpp"

namespace bic {

using RateVar = std::string;

/// Rational combination of MI atoms plus a constant.
struct LinExpr {
  std::map<MiAtom, Rational> coeffs;
  Rational constant{0};

  LinExpr() = default;
  explicit LinExpr(Rational c) : constant(std::move(c)) {}
  static LinExpr atom(const MiAtom& a, Rational c = Rational(1)) {
    LinExpr e;
    if (c != 0) e.coeffs.emplace(a, std::move(c));
    return e;
  }

  /// Parses sums such as "I(V1;Y1|U1)+I(V2;Y2|U2)-I(V1;V2|U1)" or "2*I(X1;Y1)-1/2".
  static LinExpr parse(std::string_view s);

  bool is_zero() const { return coeffs.empty() && constant == 0; }

  LinExpr& operator+=(const LinExpr& o) {
    for (const auto& [a, c] : o.coeffs) {
      auto& slot = coeffs[a];
      slot += c;
      if (slot == 0) coeffs.erase(a);
    }
    constant += o.constant;
    return *this;
  }
  LinExpr& operator*=(const Rational& s) {
    if (s == 0) {
      coeffs.clear();
      constant = 0;
      return *this;
    }
    for (auto& [a, c] : coeffs) c *= s;
    constant *= s;
    return *this;
  }
  LinExpr& operator-=(const LinExpr& o) {
    LinExpr neg = o;
    neg *= Rational(-1);
    return *this += neg;
  }
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Rational& s) { return a *= s; }
  friend bool operator==(const LinExpr& a, const LinExpr& b) {
    return a.coeffs == b.coeffs && a.constant == b.constant;
  }
  friend bool operator<(const LinExpr& a, const LinExpr& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.constant < b.constant;
  }

  double evaluate(const AtomValuation& v) const {
    double s = to_double(constant);
    for (const auto& [a, c] : coeffs) s += to_double(c) * atom_value(v, a);
    return s;
  }

  std::string to_string() const {
    std::string out;
    auto term = [&out](const Rational& c, const std::string& body) {
      const bool neg = c < 0;
      const Rational mag = neg ? Rational(-c) : c;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? "-" : "+";
      }
      if (body.empty()) {
        out += bic::to_string(mag);
      } else {
        if (mag != 1) out += bic::to_string(mag) + "*";
        out += body;
      }
    };
    for (const auto& [a, c] : coeffs)
      if (c > 0) term(c, a.to_string());
    for (const auto& [a, c] : coeffs)
      if (c < 0) term(c, a.to_string());
    if (constant != 0 || out.empty()) term(constant, "");
    return out;
  }
};

namespace detail {

inline Rational parse_rational(std::string_view s) {
  const std::string str(s);
  try {
    return Rational(str);
  } catch (const std::exception&) {
    throw ParseError("bad rational coefficient '" + str + "'");
  }
}

/// Splits "a+b-c" into signed terms, ignoring signs inside parentheses.
inline std::vector<std::pair<bool, std::string>> split_terms(std::string_view s) {
  std::vector<std::pair<bool, std::string>> out;
  std::string cur;
  bool neg = false;
  int depth = 0;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      if (!cur.empty()) out.emplace_back(neg, cur);
      cur.clear();
      neg = (ch == '-');
      continue;
    }
    cur += ch;
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + std::string(s) + "'");
  if (!cur.empty()) out.emplace_back(neg, cur);
  return out;
}

}  // namespace detail

inline LinExpr LinExpr::parse(std::string_view s) {
  LinExpr e;
  for (auto& [neg, tok] : detail::split_terms(s)) {
    Rational c(1);
    std::string body = tok;
    const auto star = tok.find('*');
    if (star != std::string::npos) {
      c = detail::parse_rational(tok.substr(0, star));
      body = tok.substr(star + 1);
    }
    if (neg) c = -c;
    if (body.rfind("I(", 0) == 0) {
      e += LinExpr::atom(MiAtom::parse(body), c);
    } else {
      e += LinExpr(c * detail::parse_rational(body));
    }
  }
  return e;
}

/// lhs . R <= rhs. A constraint with an empty lhs restricts atoms only.
struct RateInequality {
  std::map<RateVar, Rational> lhs;
  LinExpr rhs;
  std::string label;

  static RateInequality le(std::map<RateVar, Rational> lhs, LinExpr rhs, std::string label = {}) {
    RateInequality r{std::move(lhs), std::move(rhs), std::move(label)};
    r.drop_zeros();
    return r;
  }
  /// lhs . R >= rhs, stored negated.
  static RateInequality ge(std::map<RateVar, Rational> lhs, LinExpr rhs, std::string label = {}) {
    for (auto& [v, c] : lhs) c = -c;
    rhs *= Rational(-1);
    return le(std::move(lhs), std::move(rhs), std::move(label));
  }

  bool pure_atom() const { return lhs.empty(); }

  Rational coeff(const RateVar& v) const {
    auto it = lhs.find(v);
    return it == lhs.end() ? Rational(0) : it->second;
  }

  void drop_zeros() {
    for (auto it = lhs.begin(); it != lhs.end();) it = (it->second == 0) ? lhs.erase(it) : std::next(it);
  }

  /// Scales so the first nonzero coefficient (lhs, then atoms, then constant) has magnitude 1.
  void normalize() {
    drop_zeros();
    Rational s(0);
    if (!lhs.empty()) {
      s = lhs.begin()->second;
    } else if (!rhs.coeffs.empty()) {
      s = rhs.coeffs.begin()->second;
    } else {
      s = rhs.constant;
    }
    if (s == 0) return;
    if (s < 0) s = -s;
    const Rational inv = Rational(1) / s;
    for (auto& [v, c] : lhs) c *= inv;
    rhs *= inv;
  }

  RateInequality normalized() const {
    RateInequality r = *this;
    r.normalize();
    return r;
  }

  /// True when the row holds for every valuation with nonnegative atoms.
  bool trivially_true() const {
    if (!lhs.empty()) return false;
    for (const auto& [a, c] : rhs.coeffs)
      if (c < 0) return false;
    return rhs.constant >= 0;
  }

  bool same_constraint(const RateInequality& o) const {
    const auto a = normalized(), b = o.normalized();
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }

  std::string lhs_string() const {
    if (lhs.empty()) return "0";
    std::string out;
    for (const auto& [v, c] : lhs) {
      const bool neg = c < 0;
      const Rational mag = neg ? Rational(-c) : c;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? "-" : "+";
      }
      if (mag != 1) out += bic::to_string(mag) + "*";
      out += v;
    }
    return out;
  }

  std::string to_string() const { return lhs_string() + " <= " + rhs.to_string(); }

  friend bool operator<(const RateInequality& a, const RateInequality& b) {
    if (a.lhs != b.lhs) return a.lhs < b.lhs;
    return a.rhs < b.rhs;
  }
  /// Compares the constraint only, not the label.
  friend bool operator==(const RateInequality& a, const RateInequality& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

/// Parses "R1+R2" or "-R1" style rate combinations.
inline std::map<RateVar, Rational> parse_rates(std::string_view s) {
  std::map<RateVar, Rational> out;
  for (auto& [neg, tok] : detail::split_terms(s)) {
    Rational c(1);
    std::string name = tok;
    const auto star = tok.find('*');
    if (star != std::string::npos) {
      c = detail::parse_rational(tok.substr(0, star));
      name = tok.substr(star + 1);
    }
    if (neg) c = -c;
    if (name == "0") continue;
    out[name] += c;
  }
  for (auto it = out.begin(); it != out.end();) it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

/// Shorthand: le("R1+R2", "I(V1;Y1)+...", label).
inline RateInequality le(std::string_view lhs, std::string_view rhs, std::string label = {}) {
  return RateInequality::le(parse_rates(lhs), LinExpr::parse(rhs), std::move(label));
}
inline RateInequality ge(std::string_view lhs, std::string_view rhs, std::string label = {}) {
  return RateInequality::ge(parse_rates(lhs), LinExpr::parse(rhs), std::move(label));
}

struct RatePolytope {
  std::vector<RateVar> vars;
  std::vector<RateInequality> ineqs;
  std::optional<AtomValuation> valuation;

  bool has_var(const RateVar& v) const { return std::find(vars.begin(), vars.end(), v) != vars.end(); }

  std::size_t var_index(const RateVar& v) const {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) throw UnknownVariable("rate variable '" + v + "' not in system");
    return static_cast<std::size_t>(it - vars.begin());
  }

  /// Every atom mentioned, in canonical order.
  std::vector<MiAtom> atoms() const {
    std::set<MiAtom> s;
    for (const auto& r : ineqs)
      for (const auto& [a, c] : r.rhs.coeffs) s.insert(a);
    return {s.begin(), s.end()};
  }

  const RateInequality* find_label(std::string_view label) const {
    for (const auto& r : ineqs)
      if (r.label == label) return &r;
    return nullptr;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& r : ineqs) {
      out += r.to_string();
      if (!r.label.empty()) out += "    [" + r.label + "]";
      out += "\n";
    }
    return out;
  }
};

/// Normalizes rows, drops rows true for all nonnegative atoms, and removes duplicates.
inline void canonicalize(RatePolytope& p) {
  std::vector<RateInequality> out;
  for (auto r : p.ineqs) {
    r.normalize();
    if (r.trivially_true()) continue;
    bool dup = false;
    for (const auto& q : out)
      if (q.lhs == r.lhs && q.rhs == r.rhs) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(r));
  }
  p.ineqs = std::move(out);
}

/// Binds numbers to every atom of p.
inline RatePolytope evaluate(const RatePolytope& p, const AtomValuation& v) {
  RatePolytope out = p;
  AtomValuation bound;
  for (const MiAtom& a : p.atoms()) bound.emplace(a, atom_value(v, a));
  out.valuation = std::move(bound);
  return out;
}

/// Adds each new variable with its defining equality, written as two inequalities.
inline RatePolytope substitute_rates(const RatePolytope& p,
                                     const std::vector<std::pair<RateVar, std::vector<RateVar>>>& defs) {
  RatePolytope out = p;
  for (const auto& [nv, parts] : defs) {
    if (out.has_var(nv)) throw UnknownVariable("rate variable '" + nv + "' already defined");
    std::map<RateVar, Rational> row{{nv, Rational(1)}};
    for (const auto& v : parts) {
      if (!p.has_var(v)) throw UnknownVariable("rate variable '" + v + "' not in system");
      row[v] -= 1;
    }
    out.vars.push_back(nv);
    std::string sum;
    for (const auto& v : parts) sum += (sum.empty() ? "" : "+") + v;
    out.ineqs.push_back(RateInequality::le(row, LinExpr(), nv + "=" + sum));
    out.ineqs.push_back(RateInequality::ge(row, LinExpr(), nv + "=" + sum));
  }
  return out;
}

/// Projects out one variable by pairing every upper bound with every lower bound.
inline RatePolytope fm_eliminate(const RatePolytope& p, const RateVar& var) {
  p.var_index(var);
  RatePolytope out;
  for (const auto& v : p.vars)
    if (v != var) out.vars.push_back(v);
  out.valuation = p.valuation;
  std::vector<const RateInequality*> upper, lower;
  for (const auto& r : p.ineqs) {
    const Rational c = r.coeff(var);
    if (c > 0) {
      upper.push_back(&r);
    } else if (c < 0) {
      lower.push_back(&r);
    } else {
      out.ineqs.push_back(r);
    }
  }
  for (const auto* u : upper) {
    for (const auto* l : lower) {
      const Rational cu = u->coeff(var), cl = -l->coeff(var);
      RateInequality r;
      for (const auto& [v, c] : u->lhs) r.lhs[v] += c * cl;
      for (const auto& [v, c] : l->lhs) r.lhs[v] += c * cu;
      r.lhs.erase(var);
      r.drop_zeros();
      r.rhs = u->rhs * cl + l->rhs * cu;
      out.ineqs.push_back(std::move(r));
    }
  }
  canonicalize(out);
  return out;
}

/// Order relation between two atoms, x <= y, assumed valid for every admissible law.
struct AtomOrder {
  MiAtom smaller, larger;
};

/// Functional dependencies from -> to among model variables.
using FunctionalDeps = std::vector<std::pair<VarSet, VarSet>>;

/// Under the superposition pair layout each satellite determines the cloud center.
inline FunctionalDeps model_functional_deps() {
  return {{VarSet{Var::V1}, VarSet{Var::U1}}, {VarSet{Var::V2}, VarSet{Var::U1}}};
}

inline VarSet closure(VarSet s, const FunctionalDeps& fds) {
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [from, to] : fds) {
      if (from.subset_of(s) && !to.subset_of(s)) {
        s = s | to;
        grew = true;
      }
    }
  }
  return s;
}

/// Sound Shannon-type test for I(A;B|C) <= I(A';B'|C'):
/// requires C' within C and, with D = C - C', one side plus D and the other side
/// to be determined by the corresponding primed side together with C'.
inline bool atom_dominated(const MiAtom& x, const MiAtom& y, const FunctionalDeps& fds) {
  if (!y.cond().subset_of(x.cond())) return false;
  const VarSet d = x.cond() - y.cond();
  const VarSet yl = closure(y.left() | y.cond(), fds), yr = closure(y.right() | y.cond(), fds);
  auto fits = [&](VarSet a, VarSet b) {
    return ((a | d).subset_of(yl) && b.subset_of(yr)) || (a.subset_of(yl) && (b | d).subset_of(yr));
  };
  return fits(x.left(), x.right()) || fits(x.right(), x.left());
}

inline std::vector<AtomOrder> order_facts(const std::vector<MiAtom>& atoms, const FunctionalDeps& fds) {
  std::vector<AtomOrder> out;
  for (const auto& x : atoms)
    for (const auto& y : atoms)
      if (!(x == y) && atom_dominated(x, y, fds)) out.push_back({x, y});
  return out;
}

namespace detail {

/// Rows written as (rates, -atoms) . z <= constant over a shared coordinate list.
struct FarkasRow {
  std::vector<Rational> coef;
  Rational constant;
};

struct FarkasSpace {
  std::map<RateVar, std::size_t> rate_pos;
  std::map<MiAtom, std::size_t> atom_pos;
  std::size_t size() const { return rate_pos.size() + atom_pos.size(); }

  FarkasRow row(const RateInequality& r) const {
    FarkasRow out{std::vector<Rational>(size(), Rational(0)), r.rhs.constant};
    for (const auto& [v, c] : r.lhs) out.coef[rate_pos.at(v)] += c;
    for (const auto& [a, c] : r.rhs.coeffs) out.coef[atom_pos.at(a)] -= c;
    return out;
  }
};

}  // namespace detail

/// Decides exactly whether target follows from rows by a nonnegative combination,
/// treating atoms as unknowns that are nonnegative and respect the given order facts.
inline bool implies(const std::vector<RateInequality>& rows, const RateInequality& target,
                    const std::vector<AtomOrder>& facts = {}, bool atoms_nonnegative = true) {
  detail::FarkasSpace sp;
  auto note = [&sp](const RateInequality& r) {
    for (const auto& [v, c] : r.lhs) sp.rate_pos.emplace(v, 0);
    for (const auto& [a, c] : r.rhs.coeffs) sp.atom_pos.emplace(a, 0);
  };
  for (const auto& r : rows) note(r);
  note(target);
  for (const auto& f : facts) {
    sp.atom_pos.emplace(f.smaller, 0);
    sp.atom_pos.emplace(f.larger, 0);
  }
  std::size_t k = 0;
  for (auto& [v, i] : sp.rate_pos) i = k++;
  for (auto& [a, i] : sp.atom_pos) i = k++;

  std::vector<detail::FarkasRow> base;
  for (const auto& r : rows) base.push_back(sp.row(r));
  if (atoms_nonnegative) {
    for (const auto& [a, i] : sp.atom_pos) {
      detail::FarkasRow r{std::vector<Rational>(sp.size(), Rational(0)), Rational(0)};
      r.coef[i] = -1;
      base.push_back(std::move(r));
    }
  }
  for (const auto& f : facts) {
    detail::FarkasRow r{std::vector<Rational>(sp.size(), Rational(0)), Rational(0)};
    r.coef[sp.atom_pos.at(f.smaller)] += 1;
    r.coef[sp.atom_pos.at(f.larger)] -= 1;
    base.push_back(std::move(r));
  }
  const detail::FarkasRow t = sp.row(target);

  // find lambda >= 0 with sum lambda_k row_k = t, minimizing sum lambda_k const_k
  LinearProgram<Rational> lp(base.size());
  for (std::size_t j = 0; j < sp.size(); ++j) {
    std::vector<Rational> a(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) a[i] = base[i].coef[j];
    lp.add_row(std::move(a), RowSense::Eq, t.coef[j]);
  }
  for (std::size_t i = 0; i < base.size(); ++i) lp.c[i] = -base[i].constant;
  const auto res = solve(lp);
  if (res.status == LpStatus::Infeasible) return false;
  if (res.status == LpStatus::Unbounded) return true;
  return -res.value <= t.constant;
}

struct PruneOptions {
  std::vector<AtomOrder> facts;
  bool atoms_nonnegative = true;
  double slack = 1e-9;  // numeric mode only
};

namespace detail {

/// Maximizes a.R over the numeric system rows (other than skip); rates are free.
inline LpResult<double> maximize_numeric(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                         const std::vector<double>& obj, std::size_t skip) {
  const std::size_t d = obj.size();
  LinearProgram<double> lp(2 * d);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (i == skip) continue;
    std::vector<double> row(2 * d);
    for (std::size_t k = 0; k < d; ++k) {
      row[k] = A[i][k];
      row[d + k] = -A[i][k];
    }
    lp.add_row(std::move(row), RowSense::Le, b[i]);
  }
  for (std::size_t k = 0; k < d; ++k) {
    lp.c[k] = obj[k];
    lp.c[d + k] = -obj[k];
  }
  return solve(lp);
}

}  // namespace detail

/// Numeric view of an evaluated polytope: A R <= b over p.vars, atom-only rows checked separately.
struct Halfspaces {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<std::string> labels;
  /// Smallest value of the atom-only rows (>= 0 means those rows hold).
  double side_min = 0.0;
  std::string side_label;
};

inline Halfspaces to_halfspaces(const RatePolytope& p) {
  if (!p.valuation) throw MissingAtom("polytope has no valuation bound");
  Halfspaces h;
  bool first = true;
  for (const auto& r : p.ineqs) {
    const double rhs = r.rhs.evaluate(*p.valuation);
    if (r.pure_atom()) {
      if (first || rhs < h.side_min) {
        h.side_min = rhs;
        h.side_label = r.label;
        first = false;
      }
      continue;
    }
    std::vector<double> row(p.vars.size(), 0.0);
    for (const auto& [v, c] : r.lhs) row[p.var_index(v)] = to_double(c);
    h.A.push_back(std::move(row));
    h.b.push_back(rhs);
    h.labels.push_back(r.label);
  }
  return h;
}

/// Removes rows implied by the others. Symbolic mode (no valuation) is exact;
/// numeric mode uses a float LP with the given slack.
inline RatePolytope prune_redundant(const RatePolytope& p, const PruneOptions& opt = {}) {
  RatePolytope out = p;
  canonicalize(out);
  if (!p.valuation) {
    for (std::size_t i = out.ineqs.size(); i-- > 0;) {
      std::vector<RateInequality> others;
      for (std::size_t k = 0; k < out.ineqs.size(); ++k)
        if (k != i) others.push_back(out.ineqs[k]);
      if (implies(others, out.ineqs[i], opt.facts, opt.atoms_nonnegative)) out.ineqs.erase(out.ineqs.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return out;
  }
  std::vector<RateInequality> rate_rows;
  for (const auto& r : out.ineqs) {
    if (!r.pure_atom()) {
      rate_rows.push_back(r);
      continue;
    }
    if (r.rhs.evaluate(*p.valuation) < -opt.slack)
      throw Infeasible("atom constraint '" + r.to_string() + "' fails for this valuation");
  }
  out.ineqs = rate_rows;
  for (std::size_t i = out.ineqs.size(); i-- > 0;) {
    const Halfspaces h = to_halfspaces(out);
    const auto res = detail::maximize_numeric(h.A, h.b, h.A[i], i);
    if (res.status == LpStatus::Infeasible) throw Infeasible("evaluated region is empty");
    if (res.status == LpStatus::Optimal && res.value <= h.b[i] + opt.slack)
      out.ineqs.erase(out.ineqs.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

/// True when both systems have the same variables and the same normalized rows.
inline bool same_system(const RatePolytope& a, const RatePolytope& b) {
  std::set<RateVar> va(a.vars.begin(), a.vars.end()), vb(b.vars.begin(), b.vars.end());
  if (va != vb) return false;
  RatePolytope ca = a, cb = b;
  canonicalize(ca);
  canonicalize(cb);
  std::set<RateInequality> sa(ca.ineqs.begin(), ca.ineqs.end()), sb(cb.ineqs.begin(), cb.ineqs.end());
  return sa == sb;
}

/// Symbolic equivalence: each system implies every row of the other.
inline bool equivalent(const RatePolytope& a, const RatePolytope& b, const std::vector<AtomOrder>& facts = {}) {
  for (const auto& r : a.ineqs)
    if (!implies(b.ineqs, r, facts)) return false;
  for (const auto& r : b.ineqs)
    if (!implies(a.ineqs, r, facts)) return false;
  return true;
}

/// Replaces variables inside an atom. An empty image means a constant; returns
/// nullopt when the atom becomes identically zero.
inline std::optional<MiAtom> substitute_atom(const MiAtom& a, const std::map<Var, VarSet>& rules) {
  auto image = [&rules](VarSet s) {
    VarSet out;
    for (Var v : s.to_vector()) {
      auto it = rules.find(v);
      out = out | (it == rules.end() ? VarSet{v} : it->second);
    }
    return out;
  };
  const VarSet c = image(a.cond());
  const VarSet l = image(a.left()) - c, r = image(a.right()) - c;
  if (l.empty() || r.empty()) return std::nullopt;
  if (!l.disjoint(r)) throw ParseError("substitution turns " + a.to_string() + " into an entropy term");
  return MiAtom::make(l, r, c);
}

/// Applies variable substitutions to every atom and fixes the listed rates to zero.
inline RatePolytope specialize(const RatePolytope& p, const std::map<Var, VarSet>& rules,
                               const std::vector<RateVar>& zero_rates = {}) {
  RatePolytope out;
  for (const auto& v : p.vars)
    if (std::find(zero_rates.begin(), zero_rates.end(), v) == zero_rates.end()) out.vars.push_back(v);
  for (const auto& r : p.ineqs) {
    RateInequality n;
    n.label = r.label;
    for (const auto& [v, c] : r.lhs)
      if (std::find(zero_rates.begin(), zero_rates.end(), v) == zero_rates.end()) n.lhs[v] = c;
    n.rhs.constant = r.rhs.constant;
    for (const auto& [a, c] : r.rhs.coeffs) {
      if (auto s = substitute_atom(a, rules)) n.rhs += LinExpr::atom(*s, c);
    }
    out.ineqs.push_back(std::move(n));
  }
  canonicalize(out);
  return out;
}

}  // namespace bic
