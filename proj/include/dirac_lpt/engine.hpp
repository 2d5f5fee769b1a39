#pragma once

// Logarithmic perturbation theory for the radial Dirac equation.
//
// The logarithmic derivative of the large component, R = G'/G, and the
// auxiliary function Q = (m' - V')/(E + m(r) - V) are expanded in powers of
// hbar. Each order is a Laurent series about the Coulombic origin,
//
//     R_k(r) = r^{-k}     sum_i R^k_i r^i,
//     Q_k(r) = r^{-2-k}   sum_i Q^k_i r^i,
//
// and the residue quantization condition R^{k+1}_k = N delta_{k,0} fixes one
// energy correction per order. Everything here is a pure function of its
// inputs; a table build is sequential because order k needs all of order k-1.
//
// Index convention: any coefficient with a negative superscript or subscript
// is zero, and R^0_i = 0 for i > 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dirac_lpt/compensated.hpp"
#include "dirac_lpt/errors.hpp"
#include "dirac_lpt/potentials.hpp"
#include "dirac_lpt/states.hpp"

namespace dirac_lpt {

struct EngineOptions {
  /// Verify R^{k+1}_k = N delta_{k,0} after every order and throw on failure.
  bool check_residues = true;
  /// |R^{k+1}_k| <= residue_tolerance * residue_scale for k >= 1.
  double residue_tolerance = 1e-9;
  /// |R^1_0 - N| <= leading_residue_tolerance * N.
  double leading_residue_tolerance = 1e-12;
  /// Relative agreement demanded of the two energy routes in energy_series.
  double dual_path_tolerance = 1e-9;
  /// Fault injection for mutation tests: flips the sign of the chi Q^{k-3}_i
  /// term of the row recursion. Never set outside of tests.
  bool mutate_row_recursion = false;
};

template <typename Real = double> struct LaurentTables {
  int order = 0; ///< K
  int chi = 0;
  Real N{0};
  Real m{0};
  std::vector<std::vector<Real>> r_rows; ///< R^k_i, k, i in [0, K]
  std::vector<std::vector<Real>> q_rows; ///< Q^k_i, k in [0, K-1], i in [0, K]
  std::vector<Real> E;                   ///< E_0 .. E_K
  /// residues[k] = R^{k+1}_k - N delta_{k,0}, recomputed after order k is accepted.
  std::vector<Real> residues;
  /// Reference size each residue is judged against (see residue_scale).
  std::vector<Real> residue_scales;

  Real R(int k, int i) const {
    if (k < 0 || i < 0 || k >= static_cast<int>(r_rows.size()) || i > order)
      return Real(0);
    return r_rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  }
  Real Q(int k, int i) const {
    if (k < 0 || i < 0 || k >= static_cast<int>(q_rows.size()) || i > order)
      return Real(0);
    return q_rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  }
  Real R00() const { return r_rows[0][0]; }
};

/// Ordered corrections E_0..E_K plus the diagnostics of the run that made them.
struct EnergySeries {
  std::vector<double> corrections;
  double m = 0.0;
  QuantumNumbers state;
  std::string potential_label;
  int order = 0;
  /// max_k |energy_correction(k) - quantization_solve(k)| / |E_k|
  double max_dual_residual = 0.0;
  /// max_k |R^{k+1}_k - N delta_{k,0}| / residue_scale_k
  double max_residue = 0.0;
  /// Every partial sum stays below m.
  bool all_bound = true;
};

namespace detail {

/// v + d * x for an unknown x; carries an energy correction that has not been
/// fixed yet through the row recursion.
template <typename Real> struct Affine {
  Real v{0};
  Real d{0};

  Affine() = default;
  Affine(Real value) : v(value) {}
  Affine(Real value, Real slope) : v(value), d(slope) {}

  friend Affine operator+(Affine a, Affine b) { return {a.v + b.v, a.d + b.d}; }
  friend Affine operator-(Affine a, Affine b) { return {a.v - b.v, a.d - b.d}; }
  friend Affine operator-(Affine a) { return {-a.v, -a.d}; }
  friend Affine operator*(Affine a, Affine b) {
    if (a.d != Real(0) && b.d != Real(0))
      throw InternalConsistency("affine product is quadratic in the unknown correction", -1, 0.0);
    return {a.v * b.v, a.v * b.d + a.d * b.v};
  }
  friend Affine operator/(Affine a, Real s) { return {a.v / s, a.d / s}; }
};

template <typename T> struct Accumulator {
  CompensatedSum<T> s;
  void add(T x) { s += x; }
  T value() const { return s.value(); }
};

template <typename Real> struct Accumulator<Affine<Real>> {
  CompensatedSum<Real> v, d;
  void add(Affine<Real> x) {
    v += x.v;
    d += x.d;
  }
  Affine<Real> value() const { return {v.value(), d.value()}; }
};

template <typename Real> Real coeff_at(std::span<const Real> c, int i) {
  if (i < 0 || i >= static_cast<int>(c.size()))
    return Real(0);
  return c[static_cast<std::size_t>(i)];
}

/// Everything the recursions need that does not change with the order.
template <typename Real> struct RecursionContext {
  int order;
  int chi;
  Real m;
  Real R00;
  std::vector<Real> V, W;
  bool mutate = false;
};

/// Row recursion for R^k_i, k >= 1:
///
///   R^k_i = -1/(2 R^0_0) [ (i-k+1) R^{k-1}_i
///             + sum_{j=1}^{k-1} sum_{p=0}^{i} R^j_p R^{k-j}_{i-p}
///             - sum_{j=0}^{k-2} sum_{p=0}^{i} Q^j_p R^{k-2-j}_{i-p}
///             - chi Q^{k-3}_i + delta_{k,i} sum_{j=0}^{k} E_j E_{k-j}
///             - 2 E_{k-1} V_{i-k+1}
///             + delta_{k,2} sum_{p=0}^{i} (V_p V_{i-p} - W_p W_{i-p})
///             - delta_{k,1} 2 m W_i - delta_{i,0} delta_{k,2} chi (chi+1) ]
///
/// T is Real for the plain build and Affine<Real> when E_k is still unknown.
/// For Real, `magnitude` (if given) receives the sum of |addends| / |2 R^0_0|,
/// the size of what cancelled to produce the entry.
template <typename T, typename Real, typename RFn, typename QFn, typename EFn>
T row_entry(int k, int i, const RecursionContext<Real> &ctx, RFn &&R, QFn &&Q, EFn &&E, Real *magnitude = nullptr) {
  const std::span<const Real> V(ctx.V), W(ctx.W);
  const Real chi = static_cast<Real>(ctx.chi);
  Accumulator<T> acc;
  acc.add(T(static_cast<Real>(i - k + 1)) * R(k - 1, i));
  for (int j = 1; j <= k - 1; ++j)
    for (int p = 0; p <= i; ++p)
      acc.add(R(j, p) * R(k - j, i - p));
  for (int j = 0; j <= k - 2; ++j)
    for (int p = 0; p <= i; ++p)
      acc.add(-(T(Q(j, p)) * R(k - 2 - j, i - p)));
  acc.add(T((ctx.mutate ? chi : -chi) * Q(k - 3, i)));
  if (k == i)
    for (int j = 0; j <= k; ++j)
      acc.add(E(j) * E(k - j));
  acc.add(-(T(Real(2) * coeff_at(V, i - k + 1)) * E(k - 1)));
  if (k == 2)
    for (int p = 0; p <= i; ++p)
      acc.add(T(coeff_at(V, p) * coeff_at(V, i - p) - coeff_at(W, p) * coeff_at(W, i - p)));
  if (k == 1)
    acc.add(T(-Real(2) * ctx.m * coeff_at(W, i)));
  if (i == 0 && k == 2)
    acc.add(T(-chi * (chi + Real(1))));
  if constexpr (std::is_same_v<T, Real>) {
    using std::abs;
    if (magnitude)
      *magnitude = acc.s.magnitude() / abs(Real(2) * ctx.R00);
  }
  return acc.value() / (-Real(2) * ctx.R00);
}

template <typename Real> RecursionContext<Real> make_context(const LaurentTables<Real> &t, const PotentialSpec &p,
                                                              const EngineOptions &opt) {
  RecursionContext<Real> ctx{t.order, t.chi, t.m, t.R00(), {}, {}, opt.mutate_row_recursion};
  const auto v = p.vector_coeffs(), w = p.scalar_coeffs();
  ctx.V.assign(v.begin(), v.begin() + t.order + 1);
  ctx.W.assign(w.begin(), w.begin() + t.order + 1);
  return ctx;
}

/// Q^k row from Q(r) [E + m(r) - V(r)] = m'(r) - V'(r):
///   Q^0_i = (i-1)(W_i - V_i)/(E_0 + m)
///   Q^k_i = -[ sum_{j<k} Q^j_{j+i-k} E_{k-j} + sum_{j<=i} Q^{k-1}_j (W_{i-j} - V_{i-j}) ]/(E_0 + m)
template <typename Real>
std::vector<Real> q_row(int k, const LaurentTables<Real> &t, const RecursionContext<Real> &ctx) {
  const std::span<const Real> V(ctx.V), W(ctx.W);
  const Real denom = t.E[0] + t.m;
  std::vector<Real> row(static_cast<std::size_t>(t.order) + 1);
  for (int i = 0; i <= t.order; ++i) {
    Real value;
    if (k == 0) {
      value = static_cast<Real>(i - 1) * (coeff_at(W, i) - coeff_at(V, i)) / denom;
    } else {
      CompensatedSum<Real> acc;
      for (int j = 0; j <= k - 1; ++j)
        acc += t.Q(j, j + i - k) * t.E[static_cast<std::size_t>(k - j)];
      for (int j = 0; j <= i; ++j)
        acc += t.Q(k - 1, j) * (coeff_at(W, i - j) - coeff_at(V, i - j));
      value = -acc.value() / denom;
    }
    row[static_cast<std::size_t>(i)] = value;
  }
  return row;
}

/// Reference size for the residue of order k: the larger of 1 + |N R^0_0| and
/// the magnitude of the terms that cancel in it. Far into a divergent series
/// the terms grow factorially and only a relative test is meaningful.
template <typename Real> Real residue_scale(const LaurentTables<Real> &t, Real magnitude = Real(0)) {
  using std::abs;
  return std::max(Real(1) + abs(t.N * t.R00()), magnitude);
}

} // namespace detail

/// Exact Dirac-Coulomb level for the origin strengths V0, W0:
///   E_0 = m (N sqrt(N^2 + V0^2 - W0^2) - V0 W0)/(N^2 + V0^2).
/// With V0 = W0 = 0 this is the free threshold E_0 = m.
template <typename Real = double>
Real compute_E0(const QuantumNumbers &q, Real V0, Real W0, Real m) {
  using std::abs;
  using std::sqrt;
  if (!(m > Real(0)))
    throw InvalidArgument("engine: mass must be positive");
  const Real N = static_cast<Real>(principal_N(q, static_cast<double>(V0), static_cast<double>(W0)));
  const Real disc = N * N + V0 * V0 - W0 * W0;
  if (disc < Real(0))
    throw SupercriticalCoupling("engine: N^2 + V0^2 - W0^2 < 0");
  const Real E0 = m * (N * sqrt(disc) - V0 * W0) / (N * N + V0 * V0);
  if (abs(E0) > m)
    throw NoBoundState("engine: |E0| exceeds m");
  // The residue condition N R_0 = E0 V0 + m W0 with R_0 < 0 only has a
  // solution for net attraction.
  if (E0 * V0 + m * W0 > Real(0))
    throw NoBoundState("engine: E0 V0 + m W0 > 0, the interaction does not bind");
  return E0;
}

/// R_0 = -sqrt(m^2 - E_0^2), evaluated without cancellation through
/// 1 - E_0/m = (V0 + W0)^2 / (N^2 + V0^2 + V0 W0 + N sqrt(N^2 + V0^2 - W0^2)).
template <typename Real = double>
Real leading_log_derivative(const QuantumNumbers &q, Real V0, Real W0, Real m) {
  using std::sqrt;
  const Real N = static_cast<Real>(principal_N(q, static_cast<double>(V0), static_cast<double>(W0)));
  const Real root = sqrt(N * N + V0 * V0 - W0 * W0);
  const Real one_minus = (V0 + W0) * (V0 + W0) / (N * N + V0 * V0 + V0 * W0 + N * root);
  return -m * sqrt(one_minus * (Real(2) - one_minus));
}

/// E_k for k >= 1 from the closed residue formula, i.e. R^{k+1}_k = 0 with the
/// row-k diagonal R^k_k eliminated by hand:
///
///   E_k = R00 R10 / (2 (E0 R10 + V0 R00)) [ A / R10 - B / R00 ]
///
///   A = sum_{j=2}^{k-1} sum_p R^j_p R^{k+1-j}_{k-p} + 2 Theta(k-2) sum_{p>=1} R^1_p R^k_{k-p}
///       - sum_{j=0}^{k-1} sum_p Q^j_p R^{k-1-j}_{k-p} + delta_{k,1} 2 (V0 V1 - W0 W1) - chi Q^{k-2}_k
///   B = R^{k-1}_k + sum_{j=1}^{k-1} sum_p R^j_p R^{k-j}_{k-p} - sum_{j=0}^{k-2} sum_p Q^j_p R^{k-2-j}_{k-p}
///       + sum_{j=1}^{k-1} E_j E_{k-j} - 2 E_{k-1} V_1 + delta_{k,2} sum_{p<=2} (V_p V_{2-p} - W_p W_{2-p})
///       - delta_{k,1} 2 m W_1 - chi Q^{k-3}_k
///
/// Reads rows R^{<k}, the off-diagonal part R^k_{<k}, Q^{<k} and E_{<k}; all of
/// them are final once written, so this may be called on a finished table.
template <typename Real>
Real energy_correction(int k, const LaurentTables<Real> &t, const PotentialSpec &p) {
  if (k < 1 || k > t.order)
    throw InvalidArgument("engine: energy_correction order out of range");
  const auto vs = p.vector_coeffs(), ws = p.scalar_coeffs();
  auto V = [&](int i) { return i < static_cast<int>(vs.size()) ? static_cast<Real>(vs[static_cast<std::size_t>(i)]) : Real(0); };
  auto W = [&](int i) { return i < static_cast<int>(ws.size()) ? static_cast<Real>(ws[static_cast<std::size_t>(i)]) : Real(0); };
  const Real chi = static_cast<Real>(t.chi);
  const Real R00 = t.R00();
  const Real R10 = t.R(1, 0);
  const auto &E = t.E;

  CompensatedSum<Real> A;
  for (int j = 2; j <= k - 1; ++j)
    for (int q = 0; q <= k; ++q)
      A += t.R(j, q) * t.R(k + 1 - j, k - q);
  if (k >= 2)
    for (int q = 1; q <= k; ++q)
      A += Real(2) * t.R(1, q) * t.R(k, k - q);
  for (int j = 0; j <= k - 1; ++j)
    for (int q = 0; q <= k; ++q)
      A -= t.Q(j, q) * t.R(k - 1 - j, k - q);
  if (k == 1)
    A += Real(2) * (V(0) * V(1) - W(0) * W(1));
  A -= chi * t.Q(k - 2, k);

  CompensatedSum<Real> B;
  B += t.R(k - 1, k);
  for (int j = 1; j <= k - 1; ++j)
    for (int q = 0; q <= k; ++q)
      B += t.R(j, q) * t.R(k - j, k - q);
  for (int j = 0; j <= k - 2; ++j)
    for (int q = 0; q <= k; ++q)
      B -= t.Q(j, q) * t.R(k - 2 - j, k - q);
  for (int j = 1; j <= k - 1; ++j)
    B += E[static_cast<std::size_t>(j)] * E[static_cast<std::size_t>(k - j)];
  B -= Real(2) * E[static_cast<std::size_t>(k - 1)] * V(1);
  if (k == 2)
    for (int q = 0; q <= 2; ++q)
      B += V(q) * V(2 - q) - W(q) * W(2 - q);
  if (k == 1)
    B -= Real(2) * t.m * W(1);
  B -= chi * t.Q(k - 3, k);

  const Real denom = Real(2) * (E[0] * R10 + V(0) * R00);
  if (denom == Real(0))
    throw DegenerateQuantization("engine: E0 R^1_0 + V0 R^0_0 vanishes at order " + std::to_string(k));
  return R00 * R10 / denom * (A.value() / R10 - B.value() / R00);
}

/// E_k found directly from the quantization condition: row k is rebuilt with
/// E_k as an unknown x carried as (value, slope), the residue R^{k+1}_k = a + b x
/// is formed with the same row recursion, and a + b x = 0 is solved.
/// Independent of the hand elimination in energy_correction.
template <typename Real>
Real quantization_solve(int k, const LaurentTables<Real> &t, const PotentialSpec &p,
                        const EngineOptions &opt = {}) {
  using std::abs;
  using Lin = detail::Affine<Real>;
  if (k < 1 || k > t.order)
    throw InvalidArgument("engine: quantization_solve order out of range");
  const auto ctx = detail::make_context(t, p, opt);

  std::vector<Lin> row(static_cast<std::size_t>(t.order) + 1);
  auto R = [&](int j, int i) -> Lin {
    if (j == k)
      return (i < 0 || i > t.order) ? Lin{} : row[static_cast<std::size_t>(i)];
    return Lin(t.R(j, i));
  };
  auto Q = [&](int j, int i) { return t.Q(j, i); };
  auto E = [&](int j) -> Lin {
    if (j < 0)
      return Lin{};
    if (j == k)
      return Lin(Real(0), Real(1));
    return Lin(t.E[static_cast<std::size_t>(j)]);
  };
  for (int i = 0; i <= t.order; ++i)
    row[static_cast<std::size_t>(i)] = detail::row_entry<Lin>(k, i, ctx, R, Q, E);
  const Lin residue = detail::row_entry<Lin>(k + 1, k, ctx, R, Q, E);

  if (!(abs(residue.d) > Real(0)))
    throw DegenerateQuantization("engine: residue independent of E_" + std::to_string(k));
  return -residue.v / residue.d;
}

/// Fill R, Q and E through order K. Per order k: Q^{k-1}, the off-diagonal
/// part R^k_{<k}, then E_k, then R^k_{>=k}, then the residue check.
template <typename Real = double>
LaurentTables<Real> build_tables(const PotentialSpec &p, const QuantumNumbers &q, Real m, int K,
                                 const EngineOptions &opt = {}) {
  using std::abs;
  if (K < 0)
    throw InvalidArgument("engine: order must be >= 0");
  if (p.truncation_order() < K)
    throw InvalidArgument("engine: potential truncated at order " + std::to_string(p.truncation_order()) +
                          " but order " + std::to_string(K) + " requested");
  const Real V0 = static_cast<Real>(p.V0()), W0 = static_cast<Real>(p.W0());

  LaurentTables<Real> t;
  t.order = K;
  t.chi = q.chi();
  t.m = m;
  t.N = static_cast<Real>(principal_N(q, p.V0(), p.W0()));
  t.E.assign(static_cast<std::size_t>(K) + 1, Real(0));
  t.E[0] = compute_E0<Real>(q, V0, W0, m);
  const Real R00 = leading_log_derivative<Real>(q, V0, W0, m);
  if (R00 == Real(0))
    throw DegenerateState("engine: R_0 = 0 (E0 = +-m); no Coulomb binding at the origin");

  t.r_rows.assign(static_cast<std::size_t>(K) + 1, std::vector<Real>(static_cast<std::size_t>(K) + 1, Real(0)));
  t.r_rows[0][0] = R00;
  t.residues.assign(static_cast<std::size_t>(K) + 1, Real(0));
  t.residue_scales.assign(static_cast<std::size_t>(K) + 1, Real(1));

  const auto ctx = detail::make_context(t, p, opt);
  auto R = [&](int j, int i) { return t.R(j, i); };
  auto Qf = [&](int j, int i) { return t.Q(j, i); };
  auto E = [&](int j) { return j < 0 ? Real(0) : t.E[static_cast<std::size_t>(j)]; };

  if (K >= 1)
    t.q_rows.push_back(detail::q_row(0, t, ctx));

  // Order 0: R^1_0 must reproduce N.
  {
    const Real r10 = detail::row_entry<Real>(1, 0, ctx, R, Qf, E);
    t.residues[0] = r10 - t.N;
    if (opt.check_residues && !(abs(t.residues[0]) <= Real(opt.leading_residue_tolerance) * t.N))
      throw InternalConsistency("engine: R^1_0 differs from N", 0, static_cast<double>(t.residues[0]));
  }

  for (int k = 1; k <= K; ++k) {
    if (k >= 2)
      t.q_rows.push_back(detail::q_row(k - 1, t, ctx));
    auto &row = t.r_rows[static_cast<std::size_t>(k)];
    for (int i = 0; i < k && i <= K; ++i)
      row[static_cast<std::size_t>(i)] = detail::row_entry<Real>(k, i, ctx, R, Qf, E);
    t.E[static_cast<std::size_t>(k)] = energy_correction(k, t, p);
    for (int i = k; i <= K; ++i)
      row[static_cast<std::size_t>(i)] = detail::row_entry<Real>(k, i, ctx, R, Qf, E);

    Real magnitude(0);
    const Real residue = detail::row_entry<Real>(k + 1, k, ctx, R, Qf, E, &magnitude);
    t.residues[static_cast<std::size_t>(k)] = residue;
    t.residue_scales[static_cast<std::size_t>(k)] = detail::residue_scale(t, magnitude);
    if (opt.check_residues && !(abs(residue) <= Real(opt.residue_tolerance) * t.residue_scales[static_cast<std::size_t>(k)]))
      throw InternalConsistency("engine: residue R^" + std::to_string(k + 1) + "_" + std::to_string(k) +
                                    " does not vanish",
                                k, static_cast<double>(residue));
  }
  return t;
}

/// Build the tables, re-derive every E_k through quantization_solve, and
/// report both routes' agreement. Throws InternalConsistency when they differ
/// by more than opt.dual_path_tolerance.
template <typename Real = double>
EnergySeries energy_series(const PotentialSpec &p, const QuantumNumbers &q, double m, int K,
                           const EngineOptions &opt = {}) {
  using std::abs;
  const auto t = build_tables<Real>(p, q, static_cast<Real>(m), K, opt);
  EnergySeries s;
  s.m = m;
  s.state = q;
  s.potential_label = p.label();
  s.order = K;
  s.corrections.reserve(static_cast<std::size_t>(K) + 1);
  for (const Real &e : t.E)
    s.corrections.push_back(static_cast<double>(e));

  s.max_residue = static_cast<double>(abs(t.residues[0]) / t.N);
  for (int k = 1; k <= K; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    s.max_residue = std::max(s.max_residue, static_cast<double>(abs(t.residues[uk]) / t.residue_scales[uk]));
  }

  for (int k = 1; k <= K; ++k) {
    const Real direct = t.E[static_cast<std::size_t>(k)];
    const Real solved = quantization_solve(k, t, p, opt);
    // The floor keeps exact zeros (pure Coulomb) from dividing by zero.
    const Real floor = Real(1e-14) * static_cast<Real>(m);
    const Real rel = abs(direct - solved) / std::max(abs(direct), floor);
    s.max_dual_residual = std::max(s.max_dual_residual, static_cast<double>(rel));
    if (!(rel <= Real(opt.dual_path_tolerance)))
      throw InternalConsistency("engine: energy formula and quantization solve disagree at order " +
                                    std::to_string(k),
                                k, static_cast<double>(rel));
  }

  double partial = 0.0;
  for (double e : s.corrections) {
    partial += e;
    if (!(partial < m))
      s.all_bound = false;
  }
  return s;
}

} // namespace dirac_lpt
