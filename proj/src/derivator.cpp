#include "gpde/derivator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpde {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("derivator: " + msg); }

}  // namespace

Segment Segment::constant(double a, double b, double level, double jump_after) {
  return Segment{SegmentKind::Constant, a, b, level, level, jump_after};
}

Segment Segment::affine(double a, double b, double start, double slope, double jump_after) {
  if (slope < 0.0) fail("affine segment with negative slope");
  return Segment{SegmentKind::Affine, a, b, start, start + slope * (b - a), jump_after};
}

Segment Segment::sqrt_rise(double a, double b, double from, double to, double jump_after) {
  return Segment{SegmentKind::SqrtRise, a, b, from, to, jump_after};
}

Segment Segment::sqrt_fall(double a, double b, double from, double to, double jump_after) {
  return Segment{SegmentKind::SqrtFall, a, b, from, to, jump_after};
}

double Segment::value(double t) const {
  const double len = b - a;
  switch (kind) {
    case SegmentKind::Constant:
      return v0;
    case SegmentKind::Affine:
      if (t == b) return v1;  // avoid rounding at the junction
      return v0 + (v1 - v0) * ((t - a) / len);
    case SegmentKind::SqrtRise: {
      const double tau = (b - t) / len;
      return v0 + (v1 - v0) * std::sqrt(std::max(0.0, 1.0 - tau * tau));
    }
    case SegmentKind::SqrtFall: {
      const double tau = (t - a) / len;
      return v1 - (v1 - v0) * std::sqrt(std::max(0.0, 1.0 - tau * tau));
    }
  }
  return v0;
}

double Segment::density(double t) const {
  const double len = b - a;
  switch (kind) {
    case SegmentKind::Constant:
      return 0.0;
    case SegmentKind::Affine:
      return (v1 - v0) / len;
    case SegmentKind::SqrtRise: {
      const double tau = (b - t) / len;
      const double root = std::sqrt(std::max(0.0, 1.0 - tau * tau));
      if (root == 0.0) return std::numeric_limits<double>::infinity();
      return (v1 - v0) * tau / (len * root);
    }
    case SegmentKind::SqrtFall: {
      const double tau = (t - a) / len;
      const double root = std::sqrt(std::max(0.0, 1.0 - tau * tau));
      if (root == 0.0) return std::numeric_limits<double>::infinity();
      return (v1 - v0) * tau / (len * root);
    }
  }
  return 0.0;
}

double Segment::inverse_value(double v) const {
  const double len = b - a;
  const double rise = v1 - v0;
  switch (kind) {
    case SegmentKind::Constant:
      fail("inverse_value on a flat segment");
    case SegmentKind::Affine:
      return a + len * ((v - v0) / rise);
    case SegmentKind::SqrtRise: {
      const double u = (v - v0) / rise;
      return b - len * std::sqrt(std::max(0.0, 1.0 - u * u));
    }
    case SegmentKind::SqrtFall: {
      const double u = (v1 - v) / rise;
      return a + len * std::sqrt(std::max(0.0, 1.0 - u * u));
    }
  }
  return a;
}

Derivator::Derivator(std::vector<Segment> segments, std::optional<double> period,
                     std::optional<double> g_at_zero)
    : segs_(std::move(segments)), period_(period) {
  if (segs_.empty()) fail("no segments");
  if (segs_.front().a != 0.0) fail("segments must start at 0");
  for (std::size_t i = 0; i < segs_.size(); ++i) {
    const Segment& s = segs_[i];
    if (!(s.b > s.a)) fail("segment with empty span");
    if (s.v1 < s.v0) fail("decreasing segment");
    if (s.jump_after < 0.0) fail("negative jump");
    if (i + 1 < segs_.size()) {
      const Segment& n = segs_[i + 1];
      if (n.a != s.b) fail("segments must tile without gaps");
      if (std::abs(n.v0 - (s.v1 + s.jump_after)) > 1e-12)
        fail("value mismatch at junction t=" + std::to_string(s.b));
    }
  }
  end_ = segs_.back().b;
  g0_ = g_at_zero.value_or(segs_.front().v0);
  if (g0_ > segs_.front().v0) fail("g(0) may not exceed g(0+)");
  if (period_) {
    if (*period_ <= 0.0) fail("nonpositive period");
    if (end_ != *period_) fail("periodic derivator must tile exactly one period");
    increment_ = segs_.back().v1 + segs_.back().jump_after - segs_.front().v0;
    if (increment_ < 0.0) fail("negative gain per period");
  }
}

Derivator Derivator::identity(double t_max) {
  if (!(t_max > 0.0)) fail("identity needs t_max > 0");
  return Derivator({Segment::affine(0.0, t_max, 0.0, 1.0)});
}

Derivator Derivator::silkworm() {
  std::vector<Segment> segs = {
      Segment::sqrt_rise(0.0, 2.0, 0.0, 1.0),
      Segment::constant(2.0, 3.0, 1.0),
      Segment::sqrt_fall(3.0, 4.0, 1.0, 2.0, 1.0),
      Segment::constant(4.0, 5.0, 3.0, 1.0),
  };
  return Derivator(std::move(segs), 5.0);
}

Derivator Derivator::step(double t0, double delta, double t_max) {
  if (!(t0 > 0.0) || !(t_max > t0)) fail("step needs 0 < t0 < t_max");
  if (!(delta > 0.0)) fail("step needs delta > 0");
  return Derivator({Segment::constant(0.0, t0, 0.0, delta), Segment::constant(t0, t_max, delta)});
}

void Derivator::check_domain(double t) const {
  if (t < 0.0) throw std::domain_error("derivator: negative time t=" + std::to_string(t));
  if (!periodic() && t > end_)
    throw std::domain_error("derivator: t=" + std::to_string(t) + " beyond domain end " +
                            std::to_string(end_));
}

Derivator::Cell Derivator::split(double t) const {
  if (!periodic()) return {0, t};
  const double p = *period_;
  long k = static_cast<long>(std::floor(t / p));
  double local = t - static_cast<double>(k) * p;
  if (local == 0.0 && k > 0) {
    k -= 1;
    local = p;
  } else if (local >= p) {  // floor rounding at cell edges
    k += 1;
    local -= p;
    if (local == 0.0) {
      k -= 1;
      local = p;
    }
  }
  return {k, local};
}

const Segment& Derivator::segment_containing(double local) const {
  // local in (a, b]: first segment whose right end is >= local.
  auto it = std::lower_bound(segs_.begin(), segs_.end(), local,
                             [](const Segment& s, double v) { return s.b < v; });
  if (it == segs_.end()) it = std::prev(segs_.end());
  return *it;
}

double Derivator::eval(double t) const {
  check_domain(t);
  if (t == 0.0) return g0_;
  const Cell c = split(t);
  const double base = static_cast<double>(c.k) * increment_;
  if (c.local == 0.0) return base + segs_.front().v0;  // cell interior start (k reduced above)
  return base + segment_containing(c.local).value(c.local);
}

double Derivator::delta(double t) const {
  check_domain(t);
  if (t == 0.0) return segs_.front().v0 - g0_;
  const Cell c = split(t);
  if (c.local == 0.0) return 0.0;
  const Segment& s = segment_containing(c.local);
  return (c.local == s.b) ? s.jump_after : 0.0;
}

double Derivator::right_limit(double t) const { return eval(t) + delta(t); }

double Derivator::measure(double a, double b) const {
  if (b < a) throw std::invalid_argument("derivator: inverted interval");
  return eval(b) - eval(a);
}

JumpList Derivator::jumps_in(double a, double b) const {
  if (b < a) throw std::invalid_argument("derivator: inverted interval");
  check_domain(a);
  if (!periodic() && b > end_) check_domain(b);
  JumpList out;
  const double d0 = segs_.front().v0 - g0_;
  if (d0 > 0.0 && a <= 0.0 && 0.0 < b) out.push_back({0.0, d0});
  const double p = periodic() ? *period_ : 0.0;
  const long k_lo = periodic() ? std::max(0L, static_cast<long>(std::floor(a / p)) - 1) : 0;
  const long k_hi = periodic() ? static_cast<long>(std::floor(b / p)) + 1 : 0;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double base = static_cast<double>(k) * p;
    for (const Segment& s : segs_) {
      if (s.jump_after <= 0.0) continue;
      const double t = base + s.b;
      if (t >= a && t < b) out.push_back({t, s.jump_after});
    }
  }
  std::sort(out.begin(), out.end(), [](const Jump& x, const Jump& y) { return x.t < y.t; });
  return out;
}

double Derivator::measure_minus_jumps(double a, double b) const {
  double m = measure(a, b);
  for (const Jump& j : jumps_in(a, b)) m -= j.delta;
  return std::max(0.0, m);
}

void Derivator::for_each_piece(double a, double b,
                               const std::function<void(const Piece&)>& fn) const {
  if (b < a) throw std::invalid_argument("derivator: inverted interval");
  check_domain(a);
  if (!periodic()) check_domain(b);
  if (b == a) return;
  const double p = periodic() ? *period_ : 0.0;
  const long k_lo = periodic() ? static_cast<long>(std::floor(a / p)) : 0;
  const long k_hi = periodic() ? static_cast<long>(std::ceil(b / p)) : 0;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double shift = static_cast<double>(k) * p;
    const double offset = static_cast<double>(k) * increment_;
    for (const Segment& s : segs_) {
      const double lo = std::max(a, shift + s.a);
      const double hi = std::min(b, shift + s.b);
      if (hi <= lo) continue;
      fn(Piece{&s, lo, hi, shift, offset});
    }
  }
}

std::vector<double> Derivator::breakpoints(double a, double b) const {
  std::vector<double> pts{a};
  for_each_piece(a, b, [&](const Piece& pc) {
    if (pc.lo != pts.back()) pts.push_back(pc.lo);
    pts.push_back(pc.hi);
  });
  if (pts.back() != b) pts.push_back(b);
  return pts;
}

std::vector<Interval> Derivator::constancy_components(double a, double b) const {
  std::vector<Interval> out;
  Interval cur{0.0, -1.0};
  bool open = false;
  double last_hi = 0.0;
  bool last_had_jump = false;
  for_each_piece(a, b, [&](const Piece& pc) {
    if (pc.segment->flat()) {
      const bool contiguous = open && !last_had_jump && pc.lo == last_hi;
      if (contiguous) {
        cur.hi = pc.hi;
      } else {
        if (open && cur.hi > cur.lo) out.push_back(cur);
        cur = {pc.lo, pc.hi};
        open = true;
      }
    } else {
      if (open && cur.hi > cur.lo) out.push_back(cur);
      open = false;
    }
    // a jump at the piece's right end splits any constancy there
    const double local_end = pc.hi - pc.shift;
    last_had_jump = (local_end == pc.segment->b) && pc.segment->jump_after > 0.0;
    last_hi = pc.hi;
  });
  if (open && cur.hi > cur.lo) out.push_back(cur);
  return out;
}

double Derivator::period() const {
  if (!periodic()) fail("not periodic");
  return *period_;
}

double Derivator::t_max() const {
  return periodic() ? std::numeric_limits<double>::infinity() : end_;
}

}  // namespace gpde
