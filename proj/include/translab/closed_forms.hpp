// Closed-form complete translating graphs over strips {|y| < w}.
#pragma once

#include <numbers>

namespace translab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Points closer than this to the edge of a family's strip are rejected.
inline constexpr double kStripGuard = 1e-12;

enum class TiltSign { Positive, Negative };

class ClosedFormFamily {
 public:
  enum class Kind { GrimReaper, ShiftedGrimReaper, TiltedGrimReaper };

  /// log(cos y) on |y| < pi/2.
  static ClosedFormFamily grim_reaper();
  /// log(cos y) - log(cos b), 0 < b < pi/2; zero on y = +-b.
  static ClosedFormFamily shifted_grim_reaper(double b);
  /// (2b/pi)^2 log(cos(y pi / 2b)) +- x tan(theta) on |y| < b, b >= pi/2.
  static ClosedFormFamily tilted_grim_reaper(double b, TiltSign sign);

  Kind kind() const { return kind_; }
  double b() const { return b_; }
  TiltSign sign() const { return sign_; }

  /// Half-width of the strip the graph lives over.
  double half_width() const;

 private:
  ClosedFormFamily(Kind k, double b, TiltSign s) : kind_(k), b_(b), sign_(s) {}
  Kind kind_;
  double b_;
  TiltSign sign_;
};

/// Height of the family at (x, y). Throws std::domain_error outside the
/// guarded strip |y| < half_width - kStripGuard.
double evaluate(const ClosedFormFamily& fam, double x, double y);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Exact gradient (h_x, h_y); same domain rule as evaluate.
Vec2 gradient(const ClosedFormFamily& fam, double x, double y);

/// sqrt((2b/pi)^2 - 1), the slope of the tilted grim reaper over a strip of
/// half-width b. Throws std::domain_error for b < pi/2: there are no complete
/// translating graphs over thinner strips.
double tilt_slope(double b);

}  // namespace translab
