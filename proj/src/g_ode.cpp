#include "gpde/g_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpde/quadrature.hpp"
#include "gpde/stieltjes.hpp"

namespace gpde {

LinearGOde LinearGOde::constant(double lambda, std::function<double(double)> forcing, double x0,
                                double t0, double t1) {
  LinearGOde ode;
  ode.lambda_is_constant = true;
  ode.lambda_value = lambda;
  ode.forcing = std::move(forcing);
  ode.x0 = x0;
  ode.t0 = t0;
  ode.t1 = t1;
  return ode;
}

LinearGOde LinearGOde::varying(std::function<double(double)> lambda,
                               std::function<double(double)> forcing, double x0, double t0,
                               double t1) {
  LinearGOde ode;
  ode.lambda = std::move(lambda);
  ode.forcing = std::move(forcing);
  ode.x0 = x0;
  ode.t0 = t0;
  ode.t1 = t1;
  return ode;
}

RegressivityViolation::RegressivityViolation(double time_, double lambda_, int mode_)
    : std::runtime_error("regressivity violation: lambda*delta_g = 1 at t=" +
                         std::to_string(time_) + " (lambda=" + std::to_string(lambda_) +
                         (mode_ >= 0 ? ", mode=" + std::to_string(mode_) : "") + ")"),
      time(time_),
      lambda(lambda_),
      mode(mode_) {}

RegressiveCoefficients regressive_coefficients(double lambda, double delta_g) {
  const double denom = 1.0 - lambda * delta_g;
  if (denom == 0.0) throw RegressivityViolation(0.0, lambda);
  return {lambda / denom, 1.0 / denom};
}

double log_coefficient(double lambda, double delta_g) {
  if (delta_g == 0.0) return lambda;
  const double denom = 1.0 - lambda * delta_g;
  if (denom == 0.0) throw RegressivityViolation(0.0, lambda);
  return -std::log(std::abs(denom)) / delta_g;
}

SignedGExponential::SignedGExponential(const LinearGOde& ode, const Derivator& d)
    : d_(&d), ode_(ode) {
  jumps_ = d.jumps_in(ode.t0, ode.t1);
  log_prefix_.assign(jumps_.size() + 1, 0.0);
  flip_prefix_.assign(jumps_.size() + 1, 0);
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const double lam = ode_.lambda_at(jumps_[i].t);
    const double denom = 1.0 - lam * jumps_[i].delta;
    if (denom == 0.0) throw RegressivityViolation(jumps_[i].t, lam);
    // atom contribution: log_coefficient * delta = -ln|1 - lam*delta|
    log_prefix_[i + 1] = log_prefix_[i] - std::log(std::abs(denom));
    // sign flip iff 1 + d_tilde*delta = 1/(1 - lam*delta) < 0
    flip_prefix_[i + 1] = flip_prefix_[i] + (denom < 0.0 ? 1 : 0);
  }
}

double SignedGExponential::smooth_log(double t) const {
  if (ode_.lambda_is_constant) return ode_.lambda_value * d_->measure_minus_jumps(ode_.t0, t);
  double sum = 0.0;
  d_->for_each_piece(ode_.t0, t, [&](const Derivator::Piece& pc) {
    if (pc.segment->flat()) return;
    auto weighted = [&](double s) { return ode_.lambda(s) * pc.segment->density(s - pc.shift); };
    sum += integrate_classical(weighted, pc.lo, pc.hi, 1e-12);
  });
  return sum;
}

int SignedGExponential::flips_before(double t) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                   [](const Jump& j, double v) { return j.t < v; });
  return flip_prefix_[static_cast<std::size_t>(it - jumps_.begin())];
}

double SignedGExponential::log_magnitude(double t) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                   [](const Jump& j, double v) { return j.t < v; });
  return smooth_log(t) + log_prefix_[static_cast<std::size_t>(it - jumps_.begin())];
}

int SignedGExponential::sign(double t) const { return flips_before(t) % 2 == 0 ? 1 : -1; }

double SignedGExponential::value(double t) const {
  return sign(t) * std::exp(log_magnitude(t));
}

double SignedGExponential::ratio(double s, double t) const {
  return sign(s) * sign(t) * std::exp(log_magnitude(s) - log_magnitude(t));
}

bool GFunctionSample::has_right(std::size_t i) const {
  for (const RightLimit& r : right_limits)
    if (r.index == i) return true;
  return false;
}

double GFunctionSample::right(std::size_t i) const {
  for (const RightLimit& r : right_limits)
    if (r.index == i) return r.value;
  return values.at(i);
}

GFunctionSample solve_linear(const LinearGOde& ode, const Derivator& d,
                             const std::vector<double>& grid, double tol) {
  if (grid.size() < 2 || grid.front() != ode.t0 || grid.back() > ode.t1)
    throw std::invalid_argument("solve_linear: grid must start at t0 and stay within the window");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i])) throw std::invalid_argument("solve_linear: grid not increasing");

  const JumpList jumps = d.jumps_in(ode.t0, grid.back());
  for (const Jump& j : jumps)
    if (!std::binary_search(grid.begin(), grid.end(), j.t))
      throw std::invalid_argument("solve_linear: grid is missing the jump time t=" +
                                  std::to_string(j.t));

  const SignedGExponential e(ode, d);  // checks regressivity on the window

  GFunctionSample out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.values[0] = ode.x0;
  const bool forced = static_cast<bool>(ode.forcing);

  std::vector<double> logmag(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) logmag[i] = e.log_magnitude(grid[i]);

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double r =
        e.sign(grid[i]) * e.sign(grid[i + 1]) * std::exp(logmag[i] - logmag[i + 1]);
    double q = 0.0;
    if (forced) {
      // integral of [e(s)/e(t_{i+1})] * forcing(s)/(1 - lambda(s) dg(s))
      // over [t_i, t_{i+1}); the jump atom at t_i, if any, is picked up by
      // the measure's atom with the scaled integrand value.
      const double log_ref = logmag[i + 1];
      const int sign_ref = e.sign(grid[i + 1]);
      Integrand kernel{[&](double s) {
        const double dg = d.delta(s);
        double scale = 1.0;
        if (dg > 0.0) {
          const double denom = 1.0 - ode.lambda_at(s) * dg;
          scale = 1.0 / denom;
        }
        return sign_ref * e.sign(s) * std::exp(e.log_magnitude(s) - log_ref) *
               ode.forcing_at(s) * scale;
      }};
      q = integrate(d, kernel, grid[i], grid[i + 1], tol);
    }
    out.values[i + 1] = r * out.values[i] + q;
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dg = d.delta(grid[i]);
    if (dg > 0.0 && grid[i] < ode.t1)
      out.right_limits.push_back(
          {i, jump_update(out.values[i], ode.lambda_at(grid[i]), ode.forcing_at(grid[i]), dg)});
  }
  return out;
}

double residual(const LinearGOde& ode, const Derivator& d, const GFunctionSample& sol,
                double tol) {
  const std::vector<double>& grid = sol.grid;
  if (grid.empty() || grid.front() != ode.t0)
    throw std::invalid_argument("residual: sample does not cover the window");
  double defect = std::abs(sol.values[0] - ode.x0);
  double acc = 0.0;  // integral of (forcing - lambda * x) over [t0, t)
  const bool forced = static_cast<bool>(ode.forcing);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dg = d.delta(grid[i]);
    if (dg > 0.0)
      acc += (ode.forcing_at(grid[i]) - ode.lambda_at(grid[i]) * sol.values[i]) * dg;
    // linear-in-g interpolation between the right limit at t_i and the
    // left value at t_{i+1}; exact across dead time.
    const double sigma = d.measure_minus_jumps(grid[i], grid[i + 1]);
    const double xl = sol.right(i);
    const double xr = sol.values[i + 1];
    const double lam_l = ode.lambda_at(grid[i]);
    const double lam_r = ode.lambda_at(grid[i + 1]);
    acc -= 0.5 * (lam_l * xl + lam_r * xr) * sigma;
    if (forced) {
      Integrand h{[&](double s) { return ode.forcing_at(s); }};
      // continuous part only; the atom at grid[i] was added above
      double part = integrate(d, h, grid[i], grid[i + 1], tol);
      part -= ode.forcing_at(grid[i]) * dg;
      acc += part;
    }
    defect = std::max(defect, std::abs(sol.values[i + 1] - ode.x0 - acc));
  }
  return defect;
}

}  // namespace gpde
