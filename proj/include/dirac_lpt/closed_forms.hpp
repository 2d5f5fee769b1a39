#pragma once

// Analytic low-order corrections, used only to cross-check the engine.
// All expressions are in units m = 1 unless a mass argument says otherwise.
//
// Pure-vector screened Coulomb (orders 0..5). These expressions take the
// coefficients normalized to the Coulomb strength a with alternating signs:
// with engine coefficients V_0 = -a < 0 and V_i (true signs),
//
//     v_i = (-1)^{i+1} V_i / a,
//
// i.e. V(r) = -(a/r) (1 - v_1 r + v_2 r^2 - v_3 r^3 + ...). For Yukawa,
// v_i = lambda^i / i!. With this map all six orders agree with the engine to
// rounding for arbitrary coefficient lists.
//
// Mixed Yukawa V = -(a/r) e^{-lambda r}, W = -(b/r) e^{-mu r} (orders 0..3).

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "dirac_lpt/engine.hpp"
#include "dirac_lpt/errors.hpp"
#include "dirac_lpt/potentials.hpp"
#include "dirac_lpt/states.hpp"

namespace dirac_lpt::closed_forms {

struct ClosedFormInputs {
  double a = 0.0;      ///< vector strength, |V_0|
  double b = 0.0;      ///< scalar strength, |W_0|
  double lambda = 0.0; ///< vector screen (m = 1 units)
  double mu = 0.0;     ///< scalar screen (m = 1 units)
  double eps = 0.0;    ///< E_0 / m
  double rho = 0.0;    ///< sqrt(1 - eps^2)
  int chi = 0;
  double N = 0.0;
};

/// eps and rho come from compute_E0 so rho^2 = 1 - eps^2 holds by construction.
inline ClosedFormInputs make_inputs(const QuantumNumbers &q, double a, double b, double lambda = 0.0,
                                    double mu = 0.0) {
  if (a < 0.0 || b < 0.0)
    throw InvalidArgument("closed forms: strengths must be >= 0");
  ClosedFormInputs in;
  in.a = a;
  in.b = b;
  in.lambda = lambda;
  in.mu = mu;
  in.chi = q.chi();
  in.N = principal_N(q, -a, -b);
  in.eps = compute_E0<double>(q, -a, -b, 1.0);
  in.rho = -leading_log_derivative<double>(q, -a, -b, 1.0);
  return in;
}

/// Engine-convention vector coefficients (V_0 = -a) to the normalized ones.
/// Returns {a, v_1, ..., v_5}; v_0 = 1 is implied.
inline std::array<double, 6> normalized_vector_coeffs(std::span<const double> V) {
  if (V.size() < 6)
    throw InvalidArgument("closed forms: need V_0..V_5");
  const double a = -V[0];
  if (!(a > 0.0))
    throw SingularInput("closed forms: the normalization needs V_0 < 0");
  std::array<double, 6> out{a, 0, 0, 0, 0, 0};
  double sign = 1.0;
  for (std::size_t i = 1; i < 6; ++i) {
    out[i] = sign * V[i] / a;
    sign = -sign;
  }
  return out;
}

/// Pure-vector corrections E_0..E_5. `v` holds the normalized coefficients
/// v_1..v_5 in v[1..5] (v[0] is ignored); m = 1.
inline std::array<double, 6> vector_closed_form(std::span<const double> v, const ClosedFormInputs &in) {
  if (v.size() < 6)
    throw InvalidArgument("closed forms: need coefficients through order 5");
  if (in.rho == 0.0)
    throw SingularInput("closed forms: rho = 0");
  const double a = in.a, e = in.eps, rho = in.rho, N = in.N;
  const double chi = in.chi;
  const double V1 = v[1], V2 = v[2], V3 = v[3], V4 = v[4], V5 = v[5];
  const double e2 = e * e, e4 = e2 * e2;
  const double a2 = a * a, a4 = a2 * a2;
  const double r2 = rho * rho, r4 = r2 * r2;
  const double c2 = chi * chi, c3 = c2 * chi, c4 = c2 * c2;

  std::array<double, 6> E{};
  E[0] = N / std::sqrt(N * N + a2);
  E[1] = a * V1;
  E[2] = -V2 / (2.0 * r2) * (3.0 * a2 * e - chi * (chi * e + 1.0) * r2);
  E[3] = V3 / (2.0 * r4) * (a2 * a * (4.0 * e2 + 1.0) - a * (2.0 * c2 * e2 + 3.0 * chi * e + c2 - 1.0) * r2);

  const double e4_v22 = a4 * e * (5.0 * e2 - 12.0) + a2 * e * (6.0 * c2 * r2 - 5.0) * r2 +
                        c2 * (c2 * e * (e2 + 2.0) + chi * (4.0 * e2 + 2.0) + 3.0 * e) * r4;
  const double e4_v4 = -5.0 * a4 * e * (4.0 * e2 + 3.0) +
                       a2 * (6.0 * c2 * e * (2.0 * e2 + 3.0) + 6.0 * chi * (4.0 * e2 + 1.0) - 25.0 * e) * r2 -
                       3.0 * chi * (c2 - 1.0) * (chi * e + 2.0) * r4;
  E[4] = (V2 * V2 * e4_v22 + V4 * e4_v4) / (8.0 * r4 * r2);

  const double e5_v23 =
      3.0 * a4 * (8.0 * e4 - 20.0 * e2 - 3.0) -
      a2 * (c2 * (32.0 * e4 - 36.0 * e2 - 10.0) + chi * e * (10.0 * e2 - 24.0) + 9.0 * (6.0 * e2 + 1.0)) * r2 +
      chi * (30.0 * c2 * e2 * e + 24.0 * chi * e2 + 10.0 * e + chi + c3 * (8.0 * e4 + 8.0 * e2 - 1.0)) * r4;
  const double e5_v5 =
      -3.0 * a4 * (8.0 * e4 + 12.0 * e2 + 1.0) +
      a2 * (c2 * (16.0 * e4 + 48.0 * e2 + 6.0) + 10.0 * chi * e * (4.0 * e2 + 3.0) - 15.0 * (6.0 * e2 + 1.0)) * r2 +
      (5.0 * c2 * (4.0 * e2 + 3.0) - 3.0 * c4 * (4.0 * e2 + 1.0) + 50.0 * chi * e - 30.0 * c3 * e - 12.0) * r4;
  E[5] = -a / (8.0 * r4 * r4) * (V2 * V3 * e5_v23 + V5 * e5_v5);
  return E;
}

/// Mixed vector/scalar Yukawa expressions E_0..E_3, scaled by m. Screens in
/// `in` are in units of m.
inline std::array<double, 4> yukawa_closed_form(const ClosedFormInputs &in, double m = 1.0) {
  const double a = in.a, b = in.b, lam = in.lambda, mu = in.mu, e = in.eps, rho = in.rho, N = in.N;
  const double chi = in.chi;
  if (a + b * e == 0.0)
    throw SingularInput("closed forms: a + b eps = 0");
  if (rho == 0.0)
    throw SingularInput("closed forms: rho = 0");
  const double e2 = e * e, e4 = e2 * e2;
  const double a2 = a * a, a3 = a2 * a, a4 = a2 * a2;
  const double b2 = b * b, b3 = b2 * b, b4 = b2 * b2;
  const double r2 = rho * rho, r4 = r2 * r2;
  const double c2 = chi * chi;

  std::array<double, 4> E{};
  E[0] = (N * std::sqrt(N * N + a2 - b2) - a * b) / (N * N + a2);
  E[1] = a * lam + b * mu * e;

  const double l2_part = 3.0 * a3 * e - a * chi * (chi * e + 1.0) * r2 + 2.0 * a2 * b * (2.0 * e2 + 1.0) +
                         a * b2 * e * (e2 + 2.0);
  const double m2_part = 3.0 * b3 * e2 - b * chi * e * r2 - b * c2 * r2 + 2.0 * b2 * a * e * (e2 + 2.0) +
                         b * a2 * (2.0 * e2 + 1.0);
  E[2] = -(lam * lam * l2_part + mu * mu * m2_part) / (4.0 * (b * e + a) * r2);

  const double l3_part = a4 * (4.0 * e2 + 1.0) - a2 * (2.0 * c2 * e2 + 3.0 * chi * e + c2 - 1.0) * r2 +
                         3.0 * a3 * b * e * (2.0 * e2 + 3.0) + a2 * b2 * (2.0 * e4 + 11.0 * e2 + 2.0) -
                         a * b * (3.0 * chi + (3.0 * c2 - 1.0) * e) * r2 + a * b3 * e * (3.0 * e2 + 2.0);
  const double m3_part = b4 * (-8.0 * e4 + 13.0 * e2) +
                         b2 * (3.0 * chi * e2 * e + (2.0 * c2 + 1.0) * e2 - 6.0 * chi * e - 5.0 * c2) * r2 -
                         3.0 * b3 * a * e * (2.0 * e4 - e2 - 6.0) - b2 * a2 * (4.0 * e4 - 14.0 * e2 - 5.0) -
                         b * a * e * (3.0 * chi * e + 3.0 * c2 - 1.0) * r2 + b * a3 * e * (2.0 * e2 + 3.0);
  const double l2m_part = 9.0 * a3 * b * e * r2 - 6.0 * a2 * b2 * (2.0 * e4 - e2 - 1.0) +
                          3.0 * a * b3 * e * r2 * (e2 + 2.0) - 3.0 * a * b * chi * (chi * e + 1.0) * r4;
  E[3] = (lam * lam * lam * l3_part + mu * mu * mu * m3_part + lam * lam * mu * l2m_part) / (12.0 * (a + b * e) * r4);

  for (double &x : E)
    x *= m;
  return E;
}

} // namespace dirac_lpt::closed_forms
