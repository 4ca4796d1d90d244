#include "gpde/silkworm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gpde/quadrature.hpp"

namespace gpde {

namespace {

// Exact classification of the life-cycle times. Death and rebirth fire
// only at the exact representable times 5k+4 and 5(k+1).
bool is_death_time(double t) {
  if (t < 4.0) return false;
  const double r = std::fmod(t, 5.0);
  return r == 4.0;
}

bool is_rebirth_time(double t) {
  if (t < 5.0) return false;
  return std::fmod(t, 5.0) == 0.0;
}

long cycle_index(double t) { return static_cast<long>(std::floor(t / 5.0)); }

// Plain ds-integral of exp(-rate * (g(s) - g_start)) over [lo, hi], split
// at the derivator's branch points.
double live_window_integral(const Derivator& g, double rate, double lo, double hi,
                            double g_start) {
  auto f = [&](double s) { return std::exp(-rate * (g.eval(s) - g_start)); };
  std::vector<double> cuts = g.breakpoints(lo, hi);
  return integrate_classical(f, lo, hi, 1e-11, cuts);
}

}  // namespace

double silkworm_forcing(const SilkwormParams& p, double t, double x,
                        const std::function<double(double)>& history) {
  if (t < 0.0) throw std::domain_error("silkworm: negative time");
  if (is_death_time(t)) return -x;
  if (is_rebirth_time(t)) {
    if (!history) throw std::invalid_argument("silkworm: rebirth needs the history");
    return p.lambda_birth * integrate_classical(history, t - 5.0, t - 1.0, 1e-11);
  }
  return -p.c * x;
}

void validate_cycle_derivator(const Derivator& g, double T) {
  if (g.delta(0.0) > 0.0) throw std::domain_error("silkworm: derivator jumps at t = 0");
  for (const Jump& j : g.jumps_in(0.0, T)) {
    const bool death = is_death_time(j.t);
    const bool rebirth = is_rebirth_time(j.t);
    if (!death && !rebirth)
      throw std::domain_error("silkworm: unexpected jump at t=" + std::to_string(j.t));
    if (std::abs(j.delta - 1.0) > 1e-12)
      throw std::domain_error("silkworm: jump at t=" + std::to_string(j.t) +
                              " must have unit size for the death/rebirth cancellation");
  }
}

double closed_form_mode(double lambda_h, const SilkwormParams& p, const Derivator& g, double t,
                        double u0k, double prev_cycle_integral) {
  const double rate = lambda_h + p.c - 1.0;
  if (t < 0.0) throw std::domain_error("silkworm: negative time");
  const long j = cycle_index(t);
  const double start = 5.0 * static_cast<double>(j);
  if (j == 0) {
    if (t > 4.0) return 0.0;
    return u0k * std::exp(-rate * g.eval(t));
  }
  if (t == start || t > start + 4.0) return 0.0;  // dead window, left value at rebirth
  const double amplitude = p.lambda_birth * prev_cycle_integral;
  return amplitude * std::exp(-rate * (g.eval(t) - g.right_limit(start)));
}

namespace {

ModeCycles walk_cycles(double lambda_h, const SilkwormParams& p, const Derivator& g, double T,
                       double u0k) {
  ModeCycles mc;
  mc.lambda_h = lambda_h;
  mc.rate = lambda_h + p.c - 1.0;
  const long n_cycles = cycle_index(T) + 1;
  double amplitude = u0k;
  for (long j = 0; j < n_cycles; ++j) {
    const double start = 5.0 * static_cast<double>(j);
    const double g_start = j == 0 ? g.eval(0.0) : g.right_limit(start);
    const double live_end = std::min(start + 4.0, T);
    mc.amplitudes.push_back(amplitude);
    double integral = 0.0;
    if (live_end > start && amplitude != 0.0)
      integral = amplitude * live_window_integral(g, mc.rate, start, live_end, g_start);
    mc.cycle_integrals.push_back(integral);
    amplitude = p.lambda_birth * integral;
  }
  return mc;
}

GFunctionSample sample_mode(const ModeCycles& mc, const Derivator& g,
                            const std::vector<double>& grid, double T) {
  GFunctionSample out;
  out.grid = grid;
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const long j = cycle_index(t);
    const double start = 5.0 * static_cast<double>(j);
    double v = 0.0;
    if (static_cast<std::size_t>(j) < mc.amplitudes.size()) {
      const bool live = (j == 0) ? (t <= 4.0) : (t > start && t <= start + 4.0);
      if (live) {
        const double g_start = j == 0 ? g.eval(0.0) : g.right_limit(start);
        v = mc.amplitudes[j] * std::exp(-mc.rate * (g.eval(t) - g_start));
      }
    }
    out.values[i] = v;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (t >= T || g.delta(t) <= 0.0) continue;
    double r = 0.0;
    if (is_death_time(t)) {
      r = 0.0;  // x(1 - delta_g) with the unit jump
    } else if (is_rebirth_time(t)) {
      const long j = cycle_index(t);
      if (static_cast<std::size_t>(j) < mc.amplitudes.size()) r = mc.amplitudes[j];
    }
    out.right_limits.push_back({i, r});
  }
  return out;
}

}  // namespace

ModelOutput solve_silkworm_0d(const SilkwormParams& p, const Derivator& g,
                              const std::vector<double>& grid) {
  validate_cycle_derivator(g, p.horizon);
  ModelOutput out;
  out.grid = grid;
  ModeCycles mc = walk_cycles(1.0, p, g, p.horizon, p.x0_total);
  out.mean = sample_mode(mc, g, grid, p.horizon);
  out.cycles.push_back(std::move(mc));
  return out;
}

Eigen::VectorXd silkworm_initial_field(const Mesh& mesh, const SpMat& M, double x0_total) {
  Eigen::VectorXd w(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const auto& p = mesh.nodes[i];
    w[i] = p[0] * p[0] + p[1] * p[1];
  }
  const double integral = spatial_integral(M, w);
  if (integral <= 0.0) throw std::runtime_error("silkworm: degenerate initial profile");
  return (x0_total / integral) * w;
}

Silkworm2d solve_silkworm_2d(const SilkwormParams& p, const Mesh& mesh, const Derivator& g,
                             const std::vector<double>& grid,
                             const std::vector<double>& snapshot_times) {
  validate_cycle_derivator(g, p.horizon);
  Silkworm2d run;
  run.mass = assemble_mass(mesh);
  const SpMat R = assemble_stiffness(mesh, p.eta, 1.0);
  const int n_modes = std::min(p.n_modes, mesh.num_nodes());
  run.basis = solve_generalized_eig(R, run.mass, n_modes);

  const Eigen::VectorXd u0 = silkworm_initial_field(mesh, run.mass, p.x0_total);
  const Eigen::VectorXd u0k = project(u0, run.basis, run.mass);

  ModelOutput& out = run.output;
  out.grid = grid;
  out.modal.reserve(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    ModeCycles mc = walk_cycles(run.basis.eigenvalues[k], p, g, p.horizon, u0k[k]);
    out.modal.push_back(sample_mode(mc, g, grid, p.horizon));
    out.cycles.push_back(std::move(mc));
  }

  // spatial integral of mode k's eigenfunction
  Eigen::VectorXd mode_integrals(n_modes);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_nodes());
  for (int k = 0; k < n_modes; ++k)
    mode_integrals[k] = (run.mass * run.basis.vectors.col(k)).dot(ones);

  out.mean.grid = grid;
  out.mean.values.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double m = 0.0;
    for (int k = 0; k < n_modes; ++k) m += out.modal[k].values[i] * mode_integrals[k];
    out.mean.values[i] = m;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= p.horizon || g.delta(grid[i]) <= 0.0) continue;
    double m = 0.0;
    for (int k = 0; k < n_modes; ++k) m += out.modal[k].right(i) * mode_integrals[k];
    out.mean.right_limits.push_back({i, m});
  }

  for (double t : snapshot_times) {
    Eigen::VectorXd coeffs(n_modes);
    for (int k = 0; k < n_modes; ++k) {
      const ModeCycles& mc = out.cycles[k];
      const long j = cycle_index(t);
      const double prev =
          (j >= 1 && static_cast<std::size_t>(j - 1) < mc.cycle_integrals.size())
              ? mc.cycle_integrals[j - 1]
              : 0.0;
      coeffs[k] = closed_form_mode(mc.lambda_h, p, g, t, u0k[k], prev);
    }
    out.snapshots[t] = reconstruct(coeffs, run.basis);
  }
  return run;
}

}  // namespace gpde
