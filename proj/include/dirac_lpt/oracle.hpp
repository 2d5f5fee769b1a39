#pragma once

// Direct numerical solution of the radial Dirac system
//
//     G' = -chi G / r + (E - V + m + W) F
//     F' =  chi F / r - (E - V - m - W) G
//
// by two-sided shooting. Only the closed-form V(r), W(r) are used, never the
// series coefficients, so the result is independent of the recursion engine.
//
// Internally everything is scaled to m = 1 (x = m r, e = E/m).

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "dirac_lpt/errors.hpp"
#include "dirac_lpt/potentials.hpp"
#include "dirac_lpt/states.hpp"

namespace dirac_lpt {

struct OracleOptions {
  double tol = 1e-12;             ///< energy convergence, |dE| < tol m
  double ode_tolerance = 1e-13;   ///< abs/rel error per integration step
  double r_min = 1e-6;            ///< start of outward integration, in 1/m
  double decay_exponent = 45.0;   ///< r_max = r_match + decay_exponent / kappa (e^-45 ~ 3e-20)
  double min_binding = 1e-7;      ///< scan floor for (m - E)/m
  double max_binding = 0.5;       ///< scan ceiling for (m - E)/m
  int scan_points = 1200;         ///< log-spaced grid in binding between the two
  int max_iterations = 200;
  bool check_nodes = true;        ///< throw WrongState unless F has n_r zeros
};

struct OracleResult {
  double E_num = 0.0;
  double binding = 0.0;     ///< m - E_num
  int node_count = 0;       ///< zeros of the small component F on r > 0; equals n_r
  int large_nodes = 0;      ///< zeros of the large component G on r > 0
  int iterations = 0;       ///< matching-function evaluations during refinement
  double residual = 0.0;    ///< |normalized Wronskian| at the converged energy
  double bracket_width = 0.0; ///< final energy bracket, energy units
  double r_match = 0.0;     ///< matching radius, energy^-1 units
  double r_max = 0.0;
};

namespace detail {

using DiracState = std::array<double, 2>; // (G, F)

struct ScaledPotential {
  const PotentialSpec *p;
  double m;
  // Regular parts in m = 1 units: r V(r) and r W(r) are dimensionless.
  double rv(double x) const { return p->vector().regular_part(x / m); }
  double rw(double x) const { return p->scalar().regular_part(x / m); }
};

struct DiracSystem {
  ScaledPotential pot;
  double e;
  double chi;
  void operator()(const DiracState &y, DiracState &dy, double x) const {
    const double v = pot.rv(x) / x, w = pot.rw(x) / x;
    dy[0] = -chi * y[0] / x + (e - v + 1.0 + w) * y[1];
    dy[1] = chi * y[1] / x - (e - v - 1.0 - w) * y[0];
  }
};

struct Shot {
  double wronskian = 0.0; ///< (G_o F_i - F_o G_i) / (|y_o| |y_i|)
  int nodes_g = 0;
  int nodes_f = 0;
  double r_max = 0.0;
};

// Counts sign changes of both components along one integration leg.
struct NodeCounter {
  std::array<double, 2> last;
  std::array<int, 2> count{0, 0};
  explicit NodeCounter(const DiracState &start) : last(start) {}
  void operator()(const DiracState &y, double) {
    for (std::size_t c = 0; c < 2; ++c) {
      if (y[c] == 0.0)
        continue;
      if ((y[c] > 0.0) != (last[c] > 0.0))
        ++count[c];
      last[c] = y[c];
    }
  }
};

class Shooter {
public:
  Shooter(const PotentialSpec &p, const QuantumNumbers &q, double m, const OracleOptions &opt)
      : pot_{&p, m}, chi_(q.chi()), opt_(opt) {
    V0_ = p.vector().origin_strength();
    W0_ = p.scalar().origin_strength();
    gamma_ = frobenius_index(q.chi(), V0_, W0_);
    // Leading Frobenius vector: eigenvector of [[-chi, W0-V0], [V0+W0, chi]] for +gamma.
    const double g1 = W0_ - V0_, f1 = chi_ + gamma_;
    const double g2 = gamma_ - chi_, f2 = V0_ + W0_;
    if (g1 * g1 + f1 * f1 >= g2 * g2 + f2 * f2) {
      start_g_ = g1;
      start_f_ = f1;
    } else {
      start_g_ = g2;
      start_f_ = f2;
    }
    const double norm = std::hypot(start_g_, start_f_);
    start_g_ /= norm;
    start_f_ /= norm;
    // Matching inside the classically allowed region, on the Bohr scale of the
    // principal shell; with no Coulomb tail fall back to 1/m.
    const double g = std::abs(V0_) + std::abs(W0_);
    const double n_p = q.n_r + std::abs(chi_);
    x_match_ = g > 0.0 ? std::max(n_p * n_p / g, 1.0) : n_p * n_p;
  }

  double x_match() const { return x_match_; }

  Shot shoot(double e) const {
    namespace odeint = boost::numeric::odeint;
    using stepper_t = odeint::runge_kutta_fehlberg78<DiracState>;
    auto stepper = odeint::make_controlled<stepper_t>(opt_.ode_tolerance, opt_.ode_tolerance);
    const DiracSystem sys{pot_, e, static_cast<double>(chi_)};
    Shot shot;

    const double x0 = opt_.r_min;
    const double amp = std::pow(x0, gamma_);
    DiracState out{start_g_ * amp, start_f_ * amp};
    NodeCounter count_out(out);
    odeint::integrate_adaptive(stepper, sys, out, x0, x_match_, x0 * 1e-3, std::ref(count_out));

    // Inward from the decaying tail. The local decay rate uses the potential
    // at r_max so screened and Coulomb tails are both handled.
    const double kappa0 = std::sqrt(std::max(1.0 - e * e, 1e-300));
    const double x_max = x_match_ + opt_.decay_exponent / kappa0;
    const double vm = pot_.rv(x_max) / x_max, wm = pot_.rw(x_max) / x_max;
    const double k2 = (1.0 + wm) * (1.0 + wm) - (e - vm) * (e - vm);
    if (!(k2 > 0.0))
      throw NoBoundState("oracle: no decaying solution at r_max");
    const double kappa = std::sqrt(k2);
    DiracState in{1.0, -kappa / (e - vm + 1.0 + wm)};
    NodeCounter count_in(in);
    odeint::integrate_adaptive(stepper, sys, in, x_max, x_match_, -(x_max - x_match_) * 1e-4, std::ref(count_in));

    const double no = std::hypot(out[0], out[1]), ni = std::hypot(in[0], in[1]);
    shot.wronskian = (out[0] * in[1] - out[1] * in[0]) / (no * ni);
    // Sign changes are invariant under rescaling the inward piece onto the
    // outward one, so the two counts simply add.
    shot.nodes_g = count_out.count[0] + count_in.count[0];
    shot.nodes_f = count_out.count[1] + count_in.count[1];
    shot.r_max = x_max;
    return shot;
  }

private:
  ScaledPotential pot_;
  int chi_;
  OracleOptions opt_;
  double V0_ = 0.0, W0_ = 0.0, gamma_ = 0.0;
  double start_g_ = 1.0, start_f_ = 0.0;
  double x_match_ = 1.0;
};

} // namespace detail

/// Shooting solution for the level with the requested radial number.
///
/// Levels of one chi channel are ordered: the n-th from the bottom, with
/// n = n_r - (s + 1)/2, is the requested one. The binding grid
/// (opt.min_binding, opt.max_binding) is walked from deep to shallow counting
/// sign changes of the matching function; the n-th one is refined by bisection
/// and then Illinois-safeguarded secant steps. The converged level must show
/// n_r zeros of the small component F, otherwise WrongState is thrown. (Zeros
/// of G on r > 0 are reported but do not label s = +1 states: for a pure vector
/// field the extra zero of G is not on the positive axis.)
inline OracleResult solve_bound_state(const PotentialSpec &p, const QuantumNumbers &q, double m,
                                      const OracleOptions &opt = {}) {
  if (!(opt.tol > 0.0) || !(m > 0.0))
    throw InvalidArgument("oracle: tol and m must be positive");
  if (opt.scan_points < 2 || !(opt.min_binding > 0.0) || !(opt.max_binding > opt.min_binding))
    throw InvalidArgument("oracle: bad scan grid");
  const detail::Shooter shooter(p, q, m, opt);
  const int level = q.n_r - (q.s + 1) / 2;

  auto energy_at = [&](int idx) {
    const double lb = std::log(opt.max_binding), ub = std::log(opt.min_binding);
    const double t = static_cast<double>(idx) / (opt.scan_points - 1);
    return 1.0 - std::exp(lb + t * (ub - lb));
  };

  int seen = 0;
  double e_lo = energy_at(0);
  detail::Shot s_lo = shooter.shoot(e_lo);
  for (int idx = 1; idx < opt.scan_points; ++idx) {
    const double e_hi = energy_at(idx);
    const detail::Shot s_hi = shooter.shoot(e_hi);
    const bool crossed = (s_lo.wronskian > 0.0) != (s_hi.wronskian > 0.0);
    if (!crossed || seen++ < level) {
      e_lo = e_hi;
      s_lo = s_hi;
      continue;
    }

    double a = e_lo, b = e_hi, fa = s_lo.wronskian, fb = s_hi.wronskian;
    int iterations = 0;
    int side = 0;
    while (b - a > opt.tol && iterations < opt.max_iterations) {
      double c = 0.5 * (a + b);
      if (b - a <= 1e-6) {
        const double sec = (a * fb - b * fa) / (fb - fa);
        if (sec > a && sec < b)
          c = sec;
      }
      const detail::Shot sc = shooter.shoot(c);
      ++iterations;
      if (sc.wronskian == 0.0) {
        a = b = c;
        break;
      }
      if ((sc.wronskian > 0.0) == (fa > 0.0)) {
        a = c;
        fa = sc.wronskian;
        if (side == -1)
          fb *= 0.5;
        side = -1;
      } else {
        b = c;
        fb = sc.wronskian;
        if (side == 1)
          fa *= 0.5;
        side = 1;
      }
    }
    const double e_root = 0.5 * (a + b);
    const detail::Shot root = shooter.shoot(e_root);
    OracleResult r;
    r.E_num = e_root * m;
    r.binding = (1.0 - e_root) * m;
    r.node_count = root.nodes_f;
    r.large_nodes = root.nodes_g;
    r.iterations = iterations;
    r.residual = std::abs(root.wronskian);
    r.bracket_width = (b - a) * m;
    r.r_match = shooter.x_match() / m;
    r.r_max = root.r_max / m;
    if (opt.check_nodes && r.node_count != q.n_r)
      throw WrongState("oracle: converged level has " + std::to_string(r.node_count) + " zeros of F, expected " +
                       std::to_string(q.n_r) + " (" + describe(q) + ")");
    return r;
  }
  throw NoBoundState("oracle: level " + std::to_string(level) + " of the channel not found in the scan for " +
                     describe(q));
}

} // namespace dirac_lpt
