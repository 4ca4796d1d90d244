#include "gpde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gpde {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule15 {
  double integral;
  double error;
};

template <typename Eval>
Rule15 gk15(const Eval& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = kWgk[7] * f(c);
  double resg = kWg[3] * f(c);
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

void check_finite(double v, double t) {
  if (!std::isfinite(v))
    throw std::runtime_error("quadrature: integrand non-finite at t=" + std::to_string(t));
}

// Bisect until the local estimate meets the tolerance share of the
// interval. Depth is capped; integrable singularities converge well
// before the cap.
template <typename Eval>
double adaptive(const Eval& f, double a, double b, double tol, int depth) {
  const Rule15 r = gk15(f, a, b);
  if (r.error <= tol || depth >= 48 || (b - a) < 1e-15 * (std::abs(a) + std::abs(b) + 1.0))
    return r.integral;
  const double c = 0.5 * (a + b);
  return adaptive(f, a, c, 0.5 * tol, depth + 1) + adaptive(f, c, b, 0.5 * tol, depth + 1);
}

std::vector<double> splits_inside(const std::vector<double>& pts, double a, double b) {
  std::vector<double> s;
  for (double p : pts)
    if (p > a && p < b) s.push_back(p);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

double integrate_classical(const std::function<double(double)>& f, double a, double b, double tol,
                           const std::vector<double>& subdivide) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature: tol must be positive");
  if (b <= a) return 0.0;
  auto eval = [&](double t) {
    const double v = f(t);
    check_finite(v, t);
    return v;
  };
  std::vector<double> cuts = splits_inside(subdivide, a, b);
  cuts.insert(cuts.begin(), a);
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double share = tol * (cuts[i + 1] - cuts[i]) / (b - a);
    total += adaptive(eval, cuts[i], cuts[i + 1], std::max(share, 1e-300), 0);
  }
  return total;
}

void integrate_classical_vec(const std::function<void(double, std::vector<double>&)>& f,
                             std::size_t dim, double a, double b, double tol,
                             std::vector<double>& out, const std::vector<double>& subdivide) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature: tol must be positive");
  out.assign(dim, 0.0);
  if (b <= a) return;

  std::vector<double> buf(dim);
  struct Piece {
    double a, b, tol;
    int depth;
  };
  auto rule = [&](double lo, double hi, std::vector<double>& acc) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    std::vector<double> resk(dim, 0.0), resg(dim, 0.0);
    auto add = [&](double t, double wk, double wg) {
      f(t, buf);
      if (buf.size() != dim)
        throw std::invalid_argument("quadrature: inconsistent integrand dimension");
      for (std::size_t i = 0; i < dim; ++i) {
        check_finite(buf[i], t);
        resk[i] += wk * buf[i];
        if (wg != 0.0) resg[i] += wg * buf[i];
      }
    };
    add(c, kWgk[7], kWg[3]);
    for (int j = 0; j < 7; ++j) {
      const double x = h * kXgk[j];
      add(c - x, kWgk[j], j % 2 == 1 ? kWg[j / 2] : 0.0);
      add(c + x, kWgk[j], j % 2 == 1 ? kWg[j / 2] : 0.0);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) err = std::max(err, std::abs((resk[i] - resg[i]) * h));
    acc = std::move(resk);
    for (double& v : acc) v *= h;
    return err;
  };

  std::vector<double> cuts = splits_inside(subdivide, a, b);
  cuts.insert(cuts.begin(), a);
  cuts.push_back(b);
  std::vector<Piece> stack;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    stack.push_back({cuts[i], cuts[i + 1],
                     std::max(tol * (cuts[i + 1] - cuts[i]) / (b - a), 1e-300), 0});
  std::vector<double> acc(dim);
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    const double err = rule(p.a, p.b, acc);
    if (err <= p.tol || p.depth >= 48 ||
        (p.b - p.a) < 1e-15 * (std::abs(p.a) + std::abs(p.b) + 1.0)) {
      for (std::size_t i = 0; i < dim; ++i) out[i] += acc[i];
    } else {
      const double c = 0.5 * (p.a + p.b);
      stack.push_back({p.a, c, 0.5 * p.tol, p.depth + 1});
      stack.push_back({c, p.b, 0.5 * p.tol, p.depth + 1});
    }
  }
}

}  // namespace gpde
