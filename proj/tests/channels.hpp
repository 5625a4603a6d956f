#pragma once
// Hand-built channels shared by the unit tests and the acceptance run.

#include <string>
#include <vector>

#include "bic/bic.hpp"

namespace fixtures {

using bic::BicChannel;
using bic::Kernel;

/// k2 row (x1,x2) -> row_of(x1,x2).
template <class F>
Kernel k2_from(std::size_t nx1, std::size_t nx2, std::size_t ny2, F row_of) {
  std::vector<std::vector<double>> rows;
  for (std::size_t a = 0; a < nx1; ++a)
    for (std::size_t b = 0; b < nx2; ++b) {
      std::vector<double> r = row_of(a, b);
      if (r.size() != ny2) throw bic::DimensionMismatch("fixture row width");
      rows.push_back(r);
    }
  return Kernel::from_rows(rows);
}

inline std::vector<double> bsc_row(std::size_t x, double p) { return x == 0 ? std::vector{1 - p, p} : std::vector{p, 1 - p}; }

inline Kernel constant_kernel(std::size_t rows) { return Kernel(rows, 1, std::vector<double>(rows, 1.0)); }

/// Y2 is Y1 seen through an identity, X2 silent at Y2.
inline BicChannel oblivious_equal() {
  return BicChannel::make(bic::bsc(0.1), k2_from(2, 2, 2, [](auto a, auto) { return bsc_row(a, 0.1); }), bic::bsc(0.2));
}

/// Y1 = X1, Y2 = X1 through BSC(0.2).
inline BicChannel oblivious_noiseless_y1() {
  return BicChannel::make(Kernel::identity(2), k2_from(2, 2, 2, [](auto a, auto) { return bsc_row(a, 0.2); }),
                          bic::bsc(0.2));
}

/// Y2 constant.
inline BicChannel oblivious_constant_y2() {
  return BicChannel::make(bic::bsc(0.1), constant_kernel(4), bic::bsc(0.2));
}

/// Y2 = Y1 through a BSC applied after Y1 = BSC(0.1)(X1), plus X2 flipping.
inline BicChannel degraded() {
  const Kernel k1 = bic::bsc(0.1);
  const Kernel d = bic::bsc(0.15);
  auto row = [&](std::size_t x1, std::size_t x2) {
    std::vector<double> r(2, 0.0);
    for (std::size_t y1 = 0; y1 < 2; ++y1)
      for (std::size_t y2 = 0; y2 < 2; ++y2) r[y2 ^ x2] += k1(x1, y1) * d(y1, y2);
    return r;
  };
  return BicChannel::make(k1, k2_from(2, 2, 2, row), bic::bsc(0.2));
}

/// Y1 constant, Y2 = X1.
inline BicChannel cognizant_blind_y1() {
  return BicChannel::make(constant_kernel(2), k2_from(2, 2, 2, [](auto a, auto) { return bsc_row(a, 0.0); }),
                          bic::bsc(0.2));
}

/// Y2 = (BSC(0.1)(X1), X2), four symbols y2 = 2*y + x2.
inline BicChannel x2_visible() {
  auto row = [](std::size_t a, std::size_t b) {
    std::vector<double> r(4, 0.0);
    const auto y = bsc_row(a, 0.1);
    r[0 + b] = y[0];
    r[2 + b] = y[1];
    return r;
  };
  return BicChannel::make(bic::bsc(0.1), k2_from(2, 2, 4, row), Kernel::identity(2));
}

/// Y2 = BSC(0.2)(X1) ignores X2, Y3 = X2.
inline BicChannel x2_invisible() {
  return BicChannel::make(Kernel::identity(2), k2_from(2, 2, 2, [](auto a, auto) { return bsc_row(a, 0.2); }),
                          Kernel::identity(2));
}

/// Y2 = X1 xor X2, Y3 = X2.
inline BicChannel xor_channel() {
  return BicChannel::make(bic::bsc(0.1), k2_from(2, 2, 2, [](auto a, auto b) { return bsc_row(a ^ b, 0.0); }),
                          Kernel::identity(2));
}

/// Y2 = (BSC(0.1)(X1), BSC(0.2)(X1 xor X2)), Y1 = BSC(0.1*0.15 mix)(X1).
inline BicChannel oblivious_ordered() {
  const double p = 0.1, q = 0.15;
  auto row = [&](std::size_t a, std::size_t b) {
    const auto u = bsc_row(a, p), w = bsc_row(a ^ b, 0.2);
    return std::vector{u[0] * w[0], u[0] * w[1], u[1] * w[0], u[1] * w[1]};
  };
  return BicChannel::make(bic::bsc(p * (1 - q) + q * (1 - p)), k2_from(2, 2, 4, row), bic::bsc(0.25));
}

/// No second transmitter: nx2 = ny3 = 1.
inline BicChannel no_interferer(const Kernel& k1, double y2_flip) {
  return BicChannel::make(k1, k2_from(2, 1, 2, [&](auto a, auto) { return bsc_row(a, y2_flip); }),
                          constant_kernel(1));
}

struct ConditionCase {
  std::string name;
  BicChannel channel;
  bic::Condition condition;
  bic::VerdictStatus expected;
  /// Known worst gap when violated (negative when unknown or not violated).
  double expected_gap;
};

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline std::vector<ConditionCase> condition_cases() {
  using bic::Condition;
  using bic::VerdictStatus;
  return {
      {"oblivious_equal", oblivious_equal(), Condition::ObliviousLessNoisy, VerdictStatus::NoViolationFound, -1},
      {"oblivious_noiseless_y1", oblivious_noiseless_y1(), Condition::ObliviousLessNoisy, VerdictStatus::Violated,
       h2(0.2)},
      {"oblivious_constant_y2", oblivious_constant_y2(), Condition::ObliviousLessNoisy, VerdictStatus::Violated,
       1.0 - h2(0.1)},
      {"cognizant_degraded", degraded(), Condition::CognizantLessNoisy, VerdictStatus::NoViolationFound, -1},
      {"cognizant_blind_y1", cognizant_blind_y1(), Condition::CognizantLessNoisy, VerdictStatus::Violated, 1.0},
      {"strong_x2_visible", x2_visible(), Condition::Strong, VerdictStatus::NoViolationFound, -1},
      {"strong_x2_invisible", x2_invisible(), Condition::Strong, VerdictStatus::Violated, 1.0},
      {"verystrong_xor", xor_channel(), Condition::VeryStrong, VerdictStatus::Violated, 1.0},
      {"verystrong_x2_visible", x2_visible(), Condition::VeryStrong, VerdictStatus::NoViolationFound, -1},
  };
}

}  // namespace fixtures
