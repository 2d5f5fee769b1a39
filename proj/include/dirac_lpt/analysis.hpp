#pragma once

// Partial sums of the (asymptotic, eventually divergent) correction series
// and the bracket estimate built from them. The even- and odd-indexed binding
// sums approach the level from opposite sides; where consecutive sums come
// closest, their mean is the estimate and their distance the error bar.
//
// "Closest" is the minimal |B[k] - B[k-1]| over k >= 2. An alternative, the
// gap between the latest elements of the two parity subsequences, coincides
// with it whenever the bracketing is clean.

#include <cmath>
#include <cstddef>
#include <vector>

#include "dirac_lpt/engine.hpp"
#include "dirac_lpt/errors.hpp"

namespace dirac_lpt {

struct SumSequence {
  double m = 0.0;
  std::vector<double> binding_sums; ///< B[k] = m - sum_{j<=k} E_j
  std::vector<int> even_indices;
  std::vector<int> odd_indices;
};

struct BracketEstimate {
  double estimate = 0.0;
  double gap = 0.0;
  int k_star = 0;
  /// Even and odd subsequences (k >= 2) are strictly monotone in opposite
  /// directions. False is a warning, not an error.
  bool bracketing = true;
};

inline SumSequence partial_sums(const EnergySeries &series) {
  if (series.corrections.empty())
    throw InvalidArgument("analysis: empty series");
  SumSequence seq;
  seq.m = series.m;
  // Accumulate the corrections first; m - E_0 is then subtracted once so the
  // binding sums keep the digits of the small terms.
  CompensatedSum<double> tail;
  const double E0 = series.corrections.front();
  for (std::size_t k = 0; k < series.corrections.size(); ++k) {
    if (k > 0)
      tail += series.corrections[k];
    seq.binding_sums.push_back((series.m - E0) - tail.value());
    (k % 2 == 0 ? seq.even_indices : seq.odd_indices).push_back(static_cast<int>(k));
  }
  return seq;
}

namespace detail {

// +1 strictly increasing, -1 strictly decreasing, 0 otherwise (or too short).
inline int strict_direction(const std::vector<double> &b, int first, int stride) {
  int dir = 0;
  for (std::size_t k = static_cast<std::size_t>(first + stride); k < b.size(); k += static_cast<std::size_t>(stride)) {
    const double d = b[k] - b[k - static_cast<std::size_t>(stride)];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (dir != 0 && s != dir))
      return 0;
    dir = s;
  }
  return dir;
}

} // namespace detail

/// Subsequence directions from k >= 2: {even, odd}, each +1, -1 or 0.
inline std::pair<int, int> subsequence_directions(const SumSequence &seq) {
  return {detail::strict_direction(seq.binding_sums, 2, 2), detail::strict_direction(seq.binding_sums, 3, 2)};
}

inline BracketEstimate bracket_estimate(const SumSequence &seq) {
  const auto &B = seq.binding_sums;
  const int K = static_cast<int>(B.size()) - 1;
  if (K < 3)
    throw InvalidArgument("analysis: bracket estimate needs order >= 3");
  BracketEstimate out;
  out.k_star = 2;
  out.gap = std::abs(B[2] - B[1]);
  for (int k = 3; k <= K; ++k) {
    const double d = std::abs(B[static_cast<std::size_t>(k)] - B[static_cast<std::size_t>(k - 1)]);
    if (d <= out.gap) { // ties go to the latest order
      out.gap = d;
      out.k_star = k;
    }
  }
  out.estimate = 0.5 * (B[static_cast<std::size_t>(out.k_star)] + B[static_cast<std::size_t>(out.k_star - 1)]);
  const auto [even, odd] = subsequence_directions(seq);
  out.bracketing = even != 0 && odd != 0 && even == -odd;
  return out;
}

} // namespace dirac_lpt
