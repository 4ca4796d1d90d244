#pragma once

#include <functional>
#include <vector>

#include "gpde/derivator.hpp"

namespace gpde {

/// Scalar integrand for mu_g-integrals. `known_discontinuities` lists
/// times where the value function is allowed to be discontinuous; the
/// quadrature splits smooth pieces there. The value must be defined at
/// every quadrature node and at every jump time of the derivator inside
/// the window.
struct Integrand {
  std::function<double(double)> value;
  std::vector<double> known_discontinuities{};
};

struct VectorIntegrand {
  std::function<std::vector<double>(double)> value;
  std::size_t dim = 0;
  std::vector<double> known_discontinuities{};
};

/// F(t_i) = integral of f over [grid[0], t_i) with respect to mu_g.
struct CumulativeIntegral {
  std::vector<double> grid;
  std::vector<double> values;
};

/// Lebesgue-Stieltjes integral of f over [a, b): the density-weighted
/// classical integral over the non-flat segments plus f(t) * delta_g(t)
/// atoms over the jumps in [a, b). Flat stretches contribute nothing.
double integrate(const Derivator& d, const Integrand& f, double a, double b, double tol = 1e-10);

std::vector<double> integrate_vector(const Derivator& d, const VectorIntegrand& f, double a,
                                     double b, double tol = 1e-10);

/// Cumulative integral along an increasing grid; values[0] = 0 and each
/// increment is integrate(d, f, grid[i], grid[i+1]).
CumulativeIntegral cumulative(const Derivator& d, const Integrand& f, std::vector<double> grid,
                              double tol = 1e-10);

/// L^p norm with respect to mu_g on [a, b). For finite p >= 1 this is
/// (integral of |f|^p)^(1/p). For p = infinity it is a grid supremum over
/// quadrature-style sample nodes of the non-flat stretches plus the jump
/// times, i.e. nodes carrying positive local measure; this approximates
/// the mu_g-essential supremum from below.
double lp_norm(const Derivator& d, const Integrand& f, double p, double a, double b,
               double tol = 1e-10);

}  // namespace gpde
