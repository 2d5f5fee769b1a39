#pragma once

// Mixed Lorentz-vector / Lorentz-scalar central potentials with a Coulomb-like
// origin,
//
//     V(r) = (1/r) sum_i V_i r^i,    W(r) = (1/r) sum_i W_i r^i,
//
// stored both as closed-form radial functions (consumed by the shooting
// oracle) and as truncated coefficient lists (consumed by the recursion
// engine). Natural units hbar = c = 1: with energies in some unit u, radii are
// in 1/u and V_i, W_i carry u^i.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dirac_lpt/errors.hpp"

namespace dirac_lpt {

enum class PotentialKind { coulomb, yukawa, custom_series };

inline const char *to_string(PotentialKind kind) {
  switch (kind) {
  case PotentialKind::coulomb:
    return "coulomb";
  case PotentialKind::yukawa:
    return "yukawa";
  case PotentialKind::custom_series:
    return "custom-series";
  }
  return "?";
}

/// One Lorentz component (vector or scalar) of the interaction.
struct PotentialComponent {
  PotentialKind kind = PotentialKind::coulomb;
  double strength = 0.0; ///< a in -(a/r) e^{-screen r}; unused for custom series
  double screen = 0.0;   ///< inverse length, in the energy unit of the coefficients
  std::vector<double> coeffs;

  /// Closed-form value at r > 0. Custom series evaluate their truncated sum,
  /// which only approximates the intended potential at small r.
  double operator()(double r) const {
    switch (kind) {
    case PotentialKind::coulomb:
      return -strength / r;
    case PotentialKind::yukawa:
      return -strength / r * std::exp(-screen * r);
    case PotentialKind::custom_series:
      break;
    }
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
      acc = acc * r + coeffs[i];
    return acc / r;
  }

  /// lim_{r->0} r V(r), the Coulomb charge seen at the origin.
  double origin_strength() const {
    if (kind == PotentialKind::custom_series)
      return coeffs.empty() ? 0.0 : coeffs.front();
    return -strength;
  }

  /// r V(r) without the 1/r singularity; finite at r = 0.
  double regular_part(double r) const {
    switch (kind) {
    case PotentialKind::coulomb:
      return -strength;
    case PotentialKind::yukawa:
      return -strength * std::exp(-screen * r);
    case PotentialKind::custom_series:
      break;
    }
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
      acc = acc * r + coeffs[i];
    return acc;
  }
};

/// Immutable description of the interaction. Carries no state information.
class PotentialSpec {
public:
  PotentialSpec(PotentialComponent vector, PotentialComponent scalar)
      : vector_(std::move(vector)), scalar_(std::move(scalar)) {
    if (vector_.coeffs.empty() || vector_.coeffs.size() != scalar_.coeffs.size())
      throw InvalidArgument("potential: coefficient lists must be non-empty and of equal length");
    for (const auto *c : {&vector_.coeffs, &scalar_.coeffs})
      for (double x : *c)
        if (!std::isfinite(x))
          throw InvalidArgument("potential: non-finite series coefficient");
  }

  const PotentialComponent &vector() const { return vector_; }
  const PotentialComponent &scalar() const { return scalar_; }

  std::span<const double> vector_coeffs() const { return vector_.coeffs; }
  std::span<const double> scalar_coeffs() const { return scalar_.coeffs; }

  int truncation_order() const { return static_cast<int>(vector_.coeffs.size()) - 1; }

  double V(double r) const { return vector_(r); }
  double W(double r) const { return scalar_(r); }

  double V0() const { return vector_.coeffs.front(); }
  double W0() const { return scalar_.coeffs.front(); }

  /// Short label used in reports, e.g. "yukawa/yukawa".
  std::string label() const {
    return std::string(to_string(vector_.kind)) + "/" + to_string(scalar_.kind);
  }

private:
  PotentialComponent vector_;
  PotentialComponent scalar_;
};

namespace detail {

inline void require_finite_nonneg(double x, const char *name) {
  if (!std::isfinite(x) || x < 0.0)
    throw InvalidArgument(std::string("potential: ") + name + " must be finite and >= 0");
}

// -a (-screen)^i / i!, built by the running product so screen = 0 yields
// exact zeros past the first entry.
inline std::vector<double> yukawa_coefficients(double strength, double screen, int order) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1);
  double term = -strength;
  for (int i = 0; i <= order; ++i) {
    c[static_cast<std::size_t>(i)] = term;
    term *= -screen / static_cast<double>(i + 1);
  }
  return c;
}

} // namespace detail

/// Attractive Yukawa pair V = -(a_v/r) e^{-lambda r}, W = -(a_s/r) e^{-mu r}
/// with Taylor coefficients through `order`.
inline PotentialSpec yukawa_spec(double a_v, double lambda, double a_s, double mu, int order) {
  if (order < 0)
    throw InvalidArgument("potential: truncation order must be >= 0");
  detail::require_finite_nonneg(a_v, "vector strength");
  detail::require_finite_nonneg(lambda, "vector screen");
  detail::require_finite_nonneg(a_s, "scalar strength");
  detail::require_finite_nonneg(mu, "scalar screen");
  PotentialComponent v{PotentialKind::yukawa, a_v, lambda,
                       detail::yukawa_coefficients(a_v, lambda, order)};
  PotentialComponent w{PotentialKind::yukawa, a_s, mu,
                       detail::yukawa_coefficients(a_s, mu, order)};
  return PotentialSpec(std::move(v), std::move(w));
}

/// Point-Coulomb pair; all coefficients past V_0, W_0 are zero.
inline PotentialSpec coulomb_spec(double a_v, double a_s, int order) {
  if (order < 0)
    throw InvalidArgument("potential: truncation order must be >= 0");
  detail::require_finite_nonneg(a_v, "vector strength");
  detail::require_finite_nonneg(a_s, "scalar strength");
  PotentialComponent v{PotentialKind::coulomb, a_v, 0.0,
                       detail::yukawa_coefficients(a_v, 0.0, order)};
  PotentialComponent w{PotentialKind::coulomb, a_s, 0.0,
                       detail::yukawa_coefficients(a_s, 0.0, order)};
  return PotentialSpec(std::move(v), std::move(w));
}

/// Coefficients taken verbatim. V_0 = 0 or W_0 = 0 is allowed.
inline PotentialSpec custom_spec(std::vector<double> vector_coeffs, std::vector<double> scalar_coeffs) {
  PotentialComponent v{PotentialKind::custom_series, 0.0, 0.0, std::move(vector_coeffs)};
  PotentialComponent w{PotentialKind::custom_series, 0.0, 0.0, std::move(scalar_coeffs)};
  return PotentialSpec(std::move(v), std::move(w));
}

/// Multiply every coefficient V_i, W_i by sigma^i (energy rescaling).
inline PotentialSpec rescaled(const PotentialSpec &p, double sigma) {
  auto scale = [sigma](PotentialComponent c) {
    double f = 1.0;
    for (double &x : c.coeffs) {
      x *= f;
      f *= sigma;
    }
    c.screen *= sigma;
    return c;
  };
  return PotentialSpec(scale(p.vector()), scale(p.scalar()));
}

} // namespace dirac_lpt
