#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gpde/derivator.hpp"
#include "gpde/g_ode.hpp"

namespace gpde {

/// Truncated spectral problem: per-mode data for
/// xi_k'_g + lambda_k xi_k = f_k, xi_k(0) = u0_k, on [0, horizon].
/// The derivator must be continuous at 0. Eigenvalues ascending positive.
struct ParabolicProblem {
  Derivator derivator;
  std::vector<double> lambdas;
  std::vector<double> u0;
  /// f_k(t); a null function means zero forcing.
  std::function<double(int, double)> forcing;
  double horizon = 0.0;
  int n_modes = 0;

  void validate() const;
};

struct ModeHypotheses {
  bool h1 = true, h2 = true, h3 = true, h4 = true, h5 = true;
  double h2_sup = 0.0;   // sup over the grid of e^{-2 lam mu([0,t)\D)} prod |1-lam dg|^2
  double h3_int = 0.0;   // mu_g-integral of lam times the same quantity
  double h4_sup = 0.0;   // sup over the grid of the inner s-integral
  double h5_int = 0.0;   // outer mu_g-integral of lam times the inner integral
  std::vector<double> h1_offending_times;
  bool all() const { return h1 && h2 && h3 && h4 && h5; }
};

struct HypothesisReport {
  std::vector<ModeHypotheses> modes;
  std::vector<double> lambdas;
  double c1 = 0.0;  // max over modes of max(h2_sup, h3_int)
  double c2 = 0.0;  // max over modes of max(h4_sup, h5_int)
  bool h1_pass = true;
  bool all_pass = true;
  bool sufficient_condition = true;  // the strict summed-log criterion over all grid pairs
  std::vector<std::pair<int, double>> h1_offenders;  // (mode index, jump time)
  std::vector<double> grid;                          // evaluation grid used for the sups
};

/// Evaluation grid for the hypothesis quantities: n uniform points on
/// [0, T] merged with the jump times.
std::vector<double> hypothesis_grid(const Derivator& d, double T, int n = 100);

HypothesisReport check_hypotheses(const Derivator& d, const std::vector<double>& lambdas,
                                  double T, int grid_points = 100);
HypothesisReport check_hypotheses(const ParabolicProblem& problem, int grid_points = 100);

struct SolutionBundle {
  std::vector<double> grid;
  std::vector<GFunctionSample> modes;
  double norm_linf_l2 = 0.0;  // sup over the grid of the modal l2 norm
  double norm_l2_h1 = 0.0;    // sqrt of integral of sum lam_k xi_k^2 d mu_g
  double dual_norm = 0.0;     // sqrt of integral of sum (f_k - lam_k xi_k)^2 / lam_k
};

/// Default solver grid: jump times, dead-time endpoints, and
/// `per_stretch` points per non-flat stretch spaced uniformly in g.
std::vector<double> default_time_grid(const Derivator& d, double T, int per_stretch = 200);

/// Per-mode closed-form solves on a shared grid (which must contain every
/// jump time in [0, T)), with the solution norms of the bundle filled in.
/// Throws RegressivityViolation naming mode and time if H1 fails.
SolutionBundle solve(const ParabolicProblem& problem, const std::vector<double>& grid);

/// Max over the first `test_mode_count` modes of the integral-form defect
/// of the solved bundle (see g_ode residual).
double solution_residual(const ParabolicProblem& problem, const SolutionBundle& bundle,
                         int test_mode_count);

struct EnergyCheck {
  double lhs = 0.0;      // norm_linf_l2 + norm_l2_h1
  double rhs = 0.0;      // 2 sqrt(C1) |u0| + 2 sqrt(C2) |f|
  double ratio = 0.0;    // lhs / rhs (0 when rhs = 0)
  double c1 = 0.0, c2 = 0.0;
  double norm_u0 = 0.0, norm_f = 0.0;
  bool holds = false;
};

EnergyCheck energy_check(const ParabolicProblem& problem, const SolutionBundle& bundle,
                         const HypothesisReport* report = nullptr);

}  // namespace gpde
