#include "gpde/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gpde/stieltjes.hpp"

namespace gpde {

namespace {

// One maximal jump-free stretch (lo, hi] together with the hypothesis
// state at its left end: logE0 = log of the H2 quantity just after lo,
// itil0 = the H4 inner integral scaled by the H2 quantity there. Both
// evolve in closed form along the stretch, which makes every H2-H5
// quantity exactly computable for a finite jump set.
struct Stretch {
  double lo, hi;
  double sigma;  // continuous measure of (lo, hi)
  double log_e0;
  double itil0;
};

struct ModeWalk {
  std::vector<Stretch> stretches;
  double h3 = 0.0;
  double h5 = 0.0;
  bool regressive = true;
  std::vector<double> offending;
};

ModeWalk walk_mode(const Derivator& d, double lambda, double T) {
  ModeWalk w;
  const JumpList jumps = d.jumps_in(0.0, T);
  std::vector<double> bounds{0.0};
  for (const Jump& j : jumps)
    if (j.t > 0.0) bounds.push_back(j.t);
  bounds.push_back(T);

  double log_e = 0.0;
  double itil = 0.0;
  // a jump exactly at t = 0 contributes before the first stretch
  if (!jumps.empty() && jumps.front().t == 0.0) {
    const double dg = jumps.front().delta;
    const double denom = 1.0 - lambda * dg;
    if (denom == 0.0) {
      w.regressive = false;
      w.offending.push_back(0.0);
      return w;
    }
    w.h3 += lambda * 1.0 * dg;  // E(0) = 1
    w.h5 += lambda * 0.0 * dg;
    log_e += 2.0 * std::log(std::abs(denom));
    itil = denom * denom * itil + dg;
  }
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double lo = bounds[i];
    const double hi = bounds[i + 1];
    const double sigma = d.measure_minus_jumps(lo, hi);
    w.stretches.push_back({lo, hi, sigma, log_e, itil});
    const double decay = std::exp(-2.0 * lambda * sigma);
    const double e0 = std::exp(log_e);
    // continuous contributions over (lo, hi)
    w.h3 += e0 * 0.5 * (1.0 - decay);
    w.h5 += itil * 0.5 * (1.0 - decay) + 0.5 * sigma - (1.0 - decay) / (4.0 * lambda);
    // state at the right end (left limits)
    const double e_hi = e0 * decay;
    const double itil_hi = decay * itil + (1.0 - decay) / (2.0 * lambda);
    const double dg = d.delta(hi);
    if (dg > 0.0 && hi < T) {
      const double denom = 1.0 - lambda * dg;
      if (denom == 0.0) {
        w.regressive = false;
        w.offending.push_back(hi);
        return w;
      }
      w.h3 += lambda * e_hi * dg;
      w.h5 += lambda * itil_hi * dg;
      log_e = log_e - 2.0 * lambda * sigma + 2.0 * std::log(std::abs(denom));
      itil = denom * denom * itil_hi + dg;
    } else {
      log_e -= 2.0 * lambda * sigma;
      itil = itil_hi;
    }
  }
  return w;
}

// H2 quantity and H4 inner integral at a point of the walked structure.
std::pair<double, double> eval_walk(const Derivator& d, double lambda, const ModeWalk& w,
                                    double t) {
  if (t == 0.0) return {1.0, 0.0};
  auto it = std::lower_bound(w.stretches.begin(), w.stretches.end(), t,
                             [](const Stretch& s, double v) { return s.hi < v; });
  if (it == w.stretches.end()) it = std::prev(w.stretches.end());
  const double sigma = d.measure_minus_jumps(it->lo, t);
  const double decay = std::exp(-2.0 * lambda * sigma);
  const double e = std::exp(it->log_e0) * decay;
  const double itil = decay * it->itil0 + (1.0 - decay) / (2.0 * lambda);
  return {e, itil};
}

}  // namespace

void ParabolicProblem::validate() const {
  if (n_modes < 1) throw std::invalid_argument("spectral: n_modes must be >= 1");
  if (static_cast<int>(lambdas.size()) < n_modes || static_cast<int>(u0.size()) < n_modes)
    throw std::invalid_argument("spectral: need lambda and u0 per mode");
  if (!(horizon > 0.0)) throw std::invalid_argument("spectral: horizon must be positive");
  for (int k = 0; k < n_modes; ++k) {
    if (!(lambdas[k] > 0.0)) throw std::invalid_argument("spectral: eigenvalues must be positive");
    if (k > 0 && lambdas[k] < lambdas[k - 1])
      throw std::invalid_argument("spectral: eigenvalues must be ascending");
  }
  if (derivator.delta(0.0) > 0.0)
    throw std::invalid_argument("spectral: derivator must be continuous at t = 0");
}

std::vector<double> hypothesis_grid(const Derivator& d, double T, int n) {
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(T * i / (n - 1));
  for (const Jump& j : d.jumps_in(0.0, T)) grid.push_back(j.t);
  grid.push_back(T);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

HypothesisReport check_hypotheses(const Derivator& d, const std::vector<double>& lambdas,
                                  double T, int grid_points) {
  HypothesisReport rep;
  rep.lambdas = lambdas;
  rep.grid = hypothesis_grid(d, T, grid_points);
  const JumpList jumps = d.jumps_in(0.0, T);

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lam = lambdas[k];
    ModeHypotheses mh;
    for (const Jump& j : jumps)
      if (1.0 - lam * j.delta == 0.0) {
        mh.h1 = false;
        mh.h1_offending_times.push_back(j.t);
        rep.h1_offenders.emplace_back(static_cast<int>(k), j.t);
      }
    if (!mh.h1) {
      mh.h2 = mh.h3 = mh.h4 = mh.h5 = false;
      rep.h1_pass = false;
      rep.modes.push_back(std::move(mh));
      continue;
    }
    const ModeWalk w = walk_mode(d, lam, T);
    for (double t : rep.grid) {
      const auto [e, itil] = eval_walk(d, lam, w, t);
      mh.h2_sup = std::max(mh.h2_sup, e);
      mh.h4_sup = std::max(mh.h4_sup, itil);
    }
    mh.h3_int = w.h3;
    mh.h5_int = w.h5;
    mh.h2 = std::isfinite(mh.h2_sup);
    mh.h3 = std::isfinite(mh.h3_int);
    mh.h4 = std::isfinite(mh.h4_sup);
    mh.h5 = std::isfinite(mh.h5_int);
    rep.c1 = std::max(rep.c1, std::max(mh.h2_sup, mh.h3_int));
    rep.c2 = std::max(rep.c2, std::max(mh.h4_sup, mh.h5_int));
    rep.modes.push_back(std::move(mh));
  }
  for (const ModeHypotheses& mh : rep.modes) rep.all_pass = rep.all_pass && mh.all();

  // strict sufficient condition of the corollary, over all grid pairs:
  // sum of ln|1 - lam dg| / lam over [s,t) must stay below the continuous
  // measure of [s,t). Prefix sums over the jump set keep this quadratic
  // loop cheap.
  rep.sufficient_condition = rep.h1_pass;
  if (rep.h1_pass) {
    for (std::size_t k = 0; k < lambdas.size() && rep.sufficient_condition; ++k) {
      const double lam = lambdas[k];
      std::vector<double> logsum(rep.grid.size(), 0.0);
      std::vector<double> cont(rep.grid.size(), 0.0);
      for (std::size_t i = 0; i + 1 < rep.grid.size(); ++i) {
        double s = 0.0;
        for (const Jump& j : jumps)
          if (j.t >= rep.grid[i] && j.t < rep.grid[i + 1])
            s += std::log(std::abs(1.0 - lam * j.delta)) / lam;
        logsum[i + 1] = logsum[i] + s;
        cont[i + 1] = cont[i] + d.measure_minus_jumps(rep.grid[i], rep.grid[i + 1]);
      }
      for (std::size_t i = 0; i < rep.grid.size() && rep.sufficient_condition; ++i)
        for (std::size_t j = i + 1; j < rep.grid.size(); ++j)
          if (!(logsum[j] - logsum[i] < cont[j] - cont[i])) {
            rep.sufficient_condition = false;
            break;
          }
    }
  }
  return rep;
}

HypothesisReport check_hypotheses(const ParabolicProblem& problem, int grid_points) {
  std::vector<double> lams(problem.lambdas.begin(), problem.lambdas.begin() + problem.n_modes);
  return check_hypotheses(problem.derivator, lams, problem.horizon, grid_points);
}

std::vector<double> default_time_grid(const Derivator& d, double T, int per_stretch) {
  std::vector<double> grid{0.0, T};
  d.for_each_piece(0.0, T, [&](const Derivator::Piece& pc) {
    grid.push_back(pc.lo);
    grid.push_back(pc.hi);
    if (pc.segment->flat()) {
      for (int i = 1; i < 8; ++i) grid.push_back(pc.lo + (pc.hi - pc.lo) * i / 8.0);
      return;
    }
    // uniform in measure, so that steep branch ends are resolved
    const double s_lo = pc.offset + pc.segment->value(pc.lo - pc.shift);
    const double s_hi = pc.offset + pc.segment->value(pc.hi - pc.shift);
    for (int i = 1; i < per_stretch; ++i) {
      const double v = s_lo + (s_hi - s_lo) * i / per_stretch;
      const double t = pc.shift + pc.segment->inverse_value(v - pc.offset);
      if (t > pc.lo && t < pc.hi) grid.push_back(t);
    }
  });
  for (const Jump& j : d.jumps_in(0.0, T)) grid.push_back(j.t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

SolutionBundle solve(const ParabolicProblem& problem, const std::vector<double>& grid) {
  problem.validate();
  SolutionBundle bundle;
  bundle.grid = grid;
  bundle.modes.reserve(problem.n_modes);
  const bool forced = static_cast<bool>(problem.forcing);
  for (int k = 0; k < problem.n_modes; ++k) {
    std::function<double(double)> fk;
    if (forced) fk = [&problem, k](double t) { return problem.forcing(k, t); };
    LinearGOde ode =
        LinearGOde::constant(problem.lambdas[k], fk, problem.u0[k], 0.0, problem.horizon);
    try {
      bundle.modes.push_back(solve_linear(ode, problem.derivator, grid));
    } catch (const RegressivityViolation& rv) {
      throw RegressivityViolation(rv.time, rv.lambda, k);
    }
  }

  // norms on the shared grid; atoms carry left values, the continuous
  // part is a trapezoid in measure between right limit and next left value
  const std::size_t n = grid.size();
  std::vector<double> sigma(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    sigma[i] = problem.derivator.measure_minus_jumps(grid[i], grid[i + 1]);

  double sup2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s2 = 0.0, s2r = 0.0;
    for (int k = 0; k < problem.n_modes; ++k) {
      const double v = bundle.modes[k].values[i];
      s2 += v * v;
      const double r = bundle.modes[k].right(i);
      s2r += r * r;
    }
    sup2 = std::max(sup2, s2);
    if (grid[i] < problem.horizon) sup2 = std::max(sup2, s2r);
  }
  bundle.norm_linf_l2 = std::sqrt(sup2);

  double h1_acc = 0.0, dual_acc = 0.0;
  for (int k = 0; k < problem.n_modes; ++k) {
    const double lam = problem.lambdas[k];
    const GFunctionSample& xs = bundle.modes[k];
    auto fval = [&](std::size_t i) { return forced ? problem.forcing(k, grid[i]) : 0.0; };
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dg = problem.derivator.delta(grid[i]);
      if (dg > 0.0) {
        const double xl = xs.values[i];
        h1_acc += lam * xl * xl * dg;
        const double w = fval(i) - lam * xl;
        dual_acc += w * w / lam * dg;
      }
      const double xl = xs.right(i);
      const double xr = xs.values[i + 1];
      h1_acc += lam * 0.5 * (xl * xl + xr * xr) * sigma[i];
      const double wl = fval(i) - lam * xl;
      const double wr = fval(i + 1) - lam * xr;
      dual_acc += 0.5 * (wl * wl + wr * wr) / lam * sigma[i];
    }
  }
  bundle.norm_l2_h1 = std::sqrt(h1_acc);
  bundle.dual_norm = std::sqrt(dual_acc);
  return bundle;
}

double solution_residual(const ParabolicProblem& problem, const SolutionBundle& bundle,
                         int test_mode_count) {
  const int m = std::min(test_mode_count, static_cast<int>(bundle.modes.size()));
  const bool forced = static_cast<bool>(problem.forcing);
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    std::function<double(double)> fk;
    if (forced) fk = [&problem, k](double t) { return problem.forcing(k, t); };
    LinearGOde ode =
        LinearGOde::constant(problem.lambdas[k], fk, problem.u0[k], 0.0, problem.horizon);
    worst = std::max(worst, residual(ode, problem.derivator, bundle.modes[k]));
  }
  return worst;
}

EnergyCheck energy_check(const ParabolicProblem& problem, const SolutionBundle& bundle,
                         const HypothesisReport* report) {
  HypothesisReport local;
  if (!report) {
    local = check_hypotheses(problem);
    report = &local;
  }
  EnergyCheck ec;
  ec.c1 = report->c1;
  ec.c2 = report->c2;
  double u0sq = 0.0;
  for (int k = 0; k < problem.n_modes; ++k) u0sq += problem.u0[k] * problem.u0[k];
  ec.norm_u0 = std::sqrt(u0sq);
  if (problem.forcing) {
    Integrand f{[&](double t) {
      double s = 0.0;
      for (int k = 0; k < problem.n_modes; ++k) {
        const double v = problem.forcing(k, t);
        s += v * v;
      }
      return s;
    }};
    ec.norm_f = std::sqrt(integrate(problem.derivator, f, 0.0, problem.horizon, 1e-11));
  }
  ec.lhs = bundle.norm_linf_l2 + bundle.norm_l2_h1;
  ec.rhs = 2.0 * std::sqrt(ec.c1) * ec.norm_u0 + 2.0 * std::sqrt(ec.c2) * ec.norm_f;
  ec.ratio = ec.rhs > 0.0 ? ec.lhs / ec.rhs : 0.0;
  ec.holds = ec.lhs <= ec.rhs * (1.0 + 1e-12) + 1e-14;
  return ec;
}

}  // namespace gpde
