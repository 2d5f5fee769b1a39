#pragma once

#include <cmath>
#include <string>

#include "dirac_lpt/errors.hpp"

namespace dirac_lpt {

/// Discrete labels of a Dirac bound state in a central field.
///
/// s is the sign of the relativistic angular number chi = s (j + 1/2) with
/// j = l - s/2, so chi = l for s = +1 and chi = -(l + 1) for s = -1. The radial
/// number n_r = n + (s + 1)/2 with n = 0, 1, ..., so s = +1 forces n_r >= 1;
/// n counts the levels below this one in the same chi channel. The small
/// component F has n_r zeros on r > 0. G does not always: in a pure vector
/// field the extra zero of an s = +1 state is not on the positive axis.
struct QuantumNumbers {
  int s = -1;
  int l = 0;
  int n_r = 0;

  int chi() const { return s == 1 ? l : -(l + 1); }
  /// 2j, kept integral.
  int twice_j() const { return 2 * l - s; }
  double j() const { return 0.5 * twice_j(); }

  friend bool operator==(const QuantumNumbers &, const QuantumNumbers &) = default;
};

inline QuantumNumbers make_state(int s, int l, int n_r) {
  if (s != 1 && s != -1)
    throw InvalidArgument("state: s must be +1 or -1, got " + std::to_string(s));
  if (l < 0 || n_r < 0)
    throw InvalidArgument("state: l and n_r must be non-negative");
  if (s == 1 && l == 0)
    throw InvalidState("state: s = +1 requires l >= 1");
  if (s == 1 && n_r == 0)
    throw InvalidState("state: s = +1 requires n_r >= 1");
  return QuantumNumbers{s, l, n_r};
}

inline std::string describe(const QuantumNumbers &q) {
  return "s=" + std::to_string(q.s) + " l=" + std::to_string(q.l) + " n_r=" + std::to_string(q.n_r) +
         " chi=" + std::to_string(q.chi());
}

/// Frobenius index sqrt(chi^2 + W0^2 - V0^2) of (F, G) ~ r^gamma at the origin.
inline double frobenius_index(int chi, double V0, double W0) {
  const double disc = static_cast<double>(chi) * chi + W0 * W0 - V0 * V0;
  if (!(disc > 0.0))
    throw SupercriticalCoupling("chi^2 + W0^2 - V0^2 = " + std::to_string(disc) + " <= 0");
  return std::sqrt(disc);
}

/// Quantization count N = n_r + sqrt(chi^2 + W0^2 - V0^2): the residue of
/// G'/G collected from the zeros plus the origin.
inline double principal_N(const QuantumNumbers &q, double V0, double W0) {
  return q.n_r + frobenius_index(q.chi(), V0, W0);
}

} // namespace dirac_lpt
