#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gpde {

/// Closed-form shapes a derivator segment can take.
///
/// SqrtRise is a quarter-ellipse arc with vertical tangent at the left
/// endpoint (value v0 at a, v1 at b); SqrtFall is its mirror with the
/// vertical tangent at the right endpoint. Both are nondecreasing for
/// v1 >= v0.
enum class SegmentKind { Constant, Affine, SqrtRise, SqrtFall };

/// One piece of a piecewise derivator on the half-open span [a, b).
///
/// The value function is continuous on the closed [a, b]; evaluation at b
/// yields the left limit g(b). `jump_after` is the jump g(b+) - g(b)
/// attached to the right endpoint, 0 for a continuous junction.
struct Segment {
  SegmentKind kind = SegmentKind::Constant;
  double a = 0.0;
  double b = 0.0;
  double v0 = 0.0;  // value at a
  double v1 = 0.0;  // left limit at b
  double jump_after = 0.0;

  double value(double t) const;
  /// dg/dt inside (a, b); unbounded near the vertical-tangent end of the
  /// sqrt kinds, zero on flat segments.
  double density(double t) const;
  /// Inverse of value() for non-flat segments, v in [v0, v1]. Used to
  /// place grid points uniformly in measure.
  double inverse_value(double v) const;
  bool flat() const { return v1 == v0; }

  static Segment constant(double a, double b, double level, double jump_after = 0.0);
  static Segment affine(double a, double b, double start, double slope, double jump_after = 0.0);
  static Segment sqrt_rise(double a, double b, double from, double to, double jump_after = 0.0);
  static Segment sqrt_fall(double a, double b, double from, double to, double jump_after = 0.0);
};

struct Jump {
  double t;
  double delta;
};
using JumpList = std::vector<Jump>;

struct Interval {
  double lo;
  double hi;
};

/// A nondecreasing, left-continuous time reparametrisation g together with
/// the interval measure it induces, mu_g([a,b)) = g(b) - g(a).
///
/// The function is described by segments tiling [0, t_max()), optionally
/// extended periodically: with period P, g(t) = k*increment + g0(t - k*P)
/// on each cell, where the increment is the gain of one full cell
/// including the closing jump. Jump times of the periodic extension are
/// computed by exact cell arithmetic so that they come out as exact
/// representable numbers.
///
/// Immutable after construction; all member functions are const and safe
/// to call concurrently.
class Derivator {
 public:
  /// `g_at_zero` permits a jump at t = 0: it is the value g(0), while
  /// segments[0].v0 is then the right limit g(0+). Defaults to continuity.
  explicit Derivator(std::vector<Segment> segments,
                     std::optional<double> period = std::nullopt,
                     std::optional<double> g_at_zero = std::nullopt);

  static Derivator identity(double t_max);
  /// The 5-periodic life-cycle derivator: sqrt rise on [0,2], flat on
  /// [2,3], sqrt rise to 2 on [3,4], jump to 3, flat on [4,5], jump to 4,
  /// then repeats shifted by 4 per period.
  static Derivator silkworm();
  /// Flat at 0 until t0, a single jump of size `delta` at t0, flat after.
  static Derivator step(double t0, double delta, double t_max);

  double eval(double t) const;
  double right_limit(double t) const;
  /// Exact jump size g(t+) - g(t); positive exactly on the jump set.
  double delta(double t) const;
  /// All jumps with time in [a, b), increasing.
  JumpList jumps_in(double a, double b) const;
  /// mu_g([a, b)) = g(b) - g(a).
  double measure(double a, double b) const;
  /// mu_g([a, b) minus the jump set): the continuous part of the measure.
  double measure_minus_jumps(double a, double b) const;
  /// Maximal open subintervals of (a, b) on which g is constant.
  std::vector<Interval> constancy_components(double a, double b) const;

  bool periodic() const { return period_.has_value(); }
  double period() const;
  /// Gain of g over one period (including the closing jump).
  double period_increment() const { return increment_; }
  /// End of the described domain; +infinity when periodic.
  double t_max() const;
  const std::vector<Segment>& segments() const { return segs_; }
  /// g(0); differs from segments()[0].v0 only when there is a jump at 0.
  double value_at_zero() const { return g0_; }

  /// One maximal subinterval of [a, b) lying inside a single (possibly
  /// period-shifted) segment. g(t) = offset + segment->value(t - shift)
  /// for t in [lo, hi].
  struct Piece {
    const Segment* segment;
    double lo;
    double hi;
    double shift;
    double offset;
  };
  /// Walks the segment structure of [a, b) in time order. Jumps are not
  /// reported here; use jumps_in.
  void for_each_piece(double a, double b, const std::function<void(const Piece&)>& fn) const;
  /// Segment boundaries intersected with [a, b], endpoints included.
  /// Natural subdivision points for quadrature and time grids.
  std::vector<double> breakpoints(double a, double b) const;

 private:
  struct Cell {
    long k;
    double local;  // in (0, period] for t > 0, 0 only at t = 0
  };
  Cell split(double t) const;
  const Segment& segment_containing(double local) const;  // local in (a, b]
  void check_domain(double t) const;

  std::vector<Segment> segs_;
  std::optional<double> period_;
  double increment_ = 0.0;
  double g0_ = 0.0;
  double end_ = 0.0;  // segs_.back().b
};

}  // namespace gpde
