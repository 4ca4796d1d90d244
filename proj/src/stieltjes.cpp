#include "gpde/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gpde/quadrature.hpp"

namespace gpde {

namespace {

void check_window(double a, double b) {
  if (b < a) throw std::invalid_argument("stieltjes: inverted interval");
}

double smooth_measure(const Derivator& d, double a, double b) {
  return d.measure_minus_jumps(a, b);
}

}  // namespace

double integrate(const Derivator& d, const Integrand& f, double a, double b, double tol) {
  check_window(a, b);
  if (!(tol > 0.0)) throw std::invalid_argument("stieltjes: tol must be positive");
  if (a == b) return 0.0;
  const double total_len = smooth_measure(d, a, b);
  double sum = 0.0;
  d.for_each_piece(a, b, [&](const Derivator::Piece& pc) {
    if (pc.segment->flat()) return;
    // weight the classical integral by the piece's share of the measure
    const double piece_tol =
        total_len > 0.0
            ? std::max(tol * d.measure_minus_jumps(pc.lo, pc.hi) / total_len, 1e-300)
            : tol;
    auto weighted = [&](double t) { return f.value(t) * pc.segment->density(t - pc.shift); };
    sum += integrate_classical(weighted, pc.lo, pc.hi, piece_tol, f.known_discontinuities);
  });
  for (const Jump& j : d.jumps_in(a, b)) {
    const double v = f.value(j.t);
    if (!std::isfinite(v))
      throw std::runtime_error("stieltjes: integrand non-finite at jump t=" + std::to_string(j.t));
    sum += v * j.delta;
  }
  return sum;
}

std::vector<double> integrate_vector(const Derivator& d, const VectorIntegrand& f, double a,
                                     double b, double tol) {
  check_window(a, b);
  if (!(tol > 0.0)) throw std::invalid_argument("stieltjes: tol must be positive");
  std::size_t dim = f.dim;
  if (dim == 0) dim = f.value(a).size();
  std::vector<double> sum(dim, 0.0);
  if (a == b) return sum;
  const double total_len = smooth_measure(d, a, b);
  std::vector<double> piece(dim);
  d.for_each_piece(a, b, [&](const Derivator::Piece& pc) {
    if (pc.segment->flat()) return;
    const double piece_tol =
        total_len > 0.0
            ? std::max(tol * d.measure_minus_jumps(pc.lo, pc.hi) / total_len, 1e-300)
            : tol;
    auto weighted = [&](double t, std::vector<double>& out) {
      out = f.value(t);
      if (out.size() != dim)
        throw std::invalid_argument("stieltjes: inconsistent integrand dimension at t=" +
                                    std::to_string(t));
      const double w = pc.segment->density(t - pc.shift);
      for (double& v : out) v *= w;
    };
    integrate_classical_vec(weighted, dim, pc.lo, pc.hi, piece_tol, piece,
                            f.known_discontinuities);
    for (std::size_t i = 0; i < dim; ++i) sum[i] += piece[i];
  });
  for (const Jump& j : d.jumps_in(a, b)) {
    const std::vector<double> v = f.value(j.t);
    if (v.size() != dim)
      throw std::invalid_argument("stieltjes: inconsistent integrand dimension at jump");
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(v[i]))
        throw std::runtime_error("stieltjes: integrand non-finite at jump t=" +
                                 std::to_string(j.t));
      sum[i] += v[i] * j.delta;
    }
  }
  return sum;
}

CumulativeIntegral cumulative(const Derivator& d, const Integrand& f, std::vector<double> grid,
                              double tol) {
  if (grid.empty()) throw std::invalid_argument("stieltjes: empty grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i])) throw std::invalid_argument("stieltjes: grid not increasing");
  CumulativeIntegral out;
  out.values.resize(grid.size());
  out.values[0] = 0.0;
  const double per_step = tol / static_cast<double>(grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    out.values[i + 1] = out.values[i] + integrate(d, f, grid[i], grid[i + 1], per_step);
  out.grid = std::move(grid);
  return out;
}

double lp_norm(const Derivator& d, const Integrand& f, double p, double a, double b, double tol) {
  check_window(a, b);
  if (std::isinf(p)) {
    double sup = 0.0;
    d.for_each_piece(a, b, [&](const Derivator::Piece& pc) {
      if (pc.segment->flat()) return;
      constexpr int kSamples = 33;
      for (int i = 0; i < kSamples; ++i) {
        const double t = pc.lo + (pc.hi - pc.lo) * (i + 0.5) / kSamples;
        sup = std::max(sup, std::abs(f.value(t)));
      }
    });
    for (const Jump& j : d.jumps_in(a, b)) sup = std::max(sup, std::abs(f.value(j.t)));
    return sup;
  }
  if (p < 1.0) throw std::invalid_argument("stieltjes: p must be >= 1 or infinity");
  Integrand powed{[&](double t) { return std::pow(std::abs(f.value(t)), p); },
                  f.known_discontinuities};
  return std::pow(integrate(d, powed, a, b, tol), 1.0 / p);
}

}  // namespace gpde
