#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <vector>

#include "gpde/derivator.hpp"
#include "gpde/fem.hpp"
#include "gpde/g_ode.hpp"
#include "gpde/mesh.hpp"

namespace gpde {

/// Life-cycle population model parameters. The death/rebirth pattern has
/// period 5: decay at rate `c` while g increases, total death at t = 5k+4,
/// rebirth at t = 5(k+1) fed by the integral of the previous cycle.
struct SilkwormParams {
  double c = 1.0;
  double lambda_birth = 2.0;
  double x0_total = 1.0;
  double eta = 1e-3;
  double horizon = 15.0;
  int n_modes = 150;
};

/// The model right-hand side f(t, x, history): -c x during a cycle, -x at
/// the death times t = 5k+4, lambda_birth * integral of the history over
/// [t-5, t-1] at the rebirth times t = 5(k+1). Inside dead time the value
/// is irrelevant (the measure vanishes there) and the first branch is
/// returned. Death/rebirth times are matched exactly.
double silkworm_forcing(const SilkwormParams& p, double t, double x,
                        const std::function<double(double)>& history);

/// Modal closed form for one cycle: within the live window of cycle j the
/// value is amplitude * exp(-(lambda_h + c - 1) (g(t) - g(5j+))), where
/// the amplitude is u0k for j = 0 and lambda_birth * prev_cycle_integral
/// afterwards; zero on the dead windows (5k+4, 5k+5].
double closed_form_mode(double lambda_h, const SilkwormParams& p, const Derivator& g, double t,
                        double u0k, double prev_cycle_integral);

/// Per-mode cycle bookkeeping: start-of-cycle amplitudes and the plain
/// time integrals of each live window feeding the next rebirth.
struct ModeCycles {
  double lambda_h = 0.0;
  double rate = 0.0;  // lambda_h + c - 1
  std::vector<double> amplitudes;       // amplitude of cycle j at its start
  std::vector<double> cycle_integrals;  // integral of the mode over live window j
};

struct ModelOutput {
  std::vector<double> grid;
  GFunctionSample mean;                    // spatial integral of the solution over time
  std::vector<GFunctionSample> modal;      // per-mode series (2-d runs)
  std::vector<ModeCycles> cycles;          // per-mode recursion data
  std::map<double, Eigen::VectorXd> snapshots;  // nodal fields at requested times (left values)
};

/// Mean-only model: the closed form with lambda_h = 1.
ModelOutput solve_silkworm_0d(const SilkwormParams& p, const Derivator& g,
                              const std::vector<double>& grid);

/// Initial datum proportional to x^2 + y^2, scaled so that its discrete
/// integral over the mesh is exactly x0_total.
Eigen::VectorXd silkworm_initial_field(const Mesh& mesh, const SpMat& M, double x0_total);

struct Silkworm2d {
  ModelOutput output;
  EigenBasis basis;
  SpMat mass;
};

/// Full 2-d run: Neumann eigenbasis with (eta, kappa = 1), per-mode
/// closed-form solutions with per-cycle memory integrals, spatial mean and
/// optional snapshots. The derivator must follow the 5-periodic life-cycle
/// jump pattern (unit jumps at 5k+4 and 5(k+1), continuous at 0).
Silkworm2d solve_silkworm_2d(const SilkwormParams& p, const Mesh& mesh, const Derivator& g,
                             const std::vector<double>& grid,
                             const std::vector<double>& snapshot_times = {});

/// Validates the jump pattern described above; throws std::domain_error.
void validate_cycle_derivator(const Derivator& g, double T);

}  // namespace gpde
