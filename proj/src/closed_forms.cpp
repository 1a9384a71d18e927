#include "translab/closed_forms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace translab {

namespace {

void check_strip(const ClosedFormFamily& fam, double y) {
  const double w = fam.half_width();
  if (!(std::abs(y) < w - kStripGuard)) {
    std::ostringstream msg;
    msg << "y = " << y << " lies outside the strip |y| < " << w;
    throw std::domain_error(msg.str());
  }
}

double signed_tilt(const ClosedFormFamily& fam) {
  const double s = tilt_slope(fam.b());
  return fam.sign() == TiltSign::Positive ? s : -s;
}

}  // namespace

ClosedFormFamily ClosedFormFamily::grim_reaper() {
  return ClosedFormFamily(Kind::GrimReaper, kHalfPi, TiltSign::Positive);
}

ClosedFormFamily ClosedFormFamily::shifted_grim_reaper(double b) {
  if (!(b > 0.0 && b < kHalfPi)) throw std::domain_error("shifted grim reaper needs 0 < b < pi/2");
  return ClosedFormFamily(Kind::ShiftedGrimReaper, b, TiltSign::Positive);
}

ClosedFormFamily ClosedFormFamily::tilted_grim_reaper(double b, TiltSign sign) {
  if (!(b >= kHalfPi)) throw std::domain_error("tilted grim reaper needs b >= pi/2");
  return ClosedFormFamily(Kind::TiltedGrimReaper, b, sign);
}

double ClosedFormFamily::half_width() const {
  return kind_ == Kind::TiltedGrimReaper ? b_ : kHalfPi;
}

double evaluate(const ClosedFormFamily& fam, double x, double y) {
  check_strip(fam, y);
  switch (fam.kind()) {
    case ClosedFormFamily::Kind::GrimReaper:
      return std::log(std::cos(y));
    case ClosedFormFamily::Kind::ShiftedGrimReaper:
      return std::log(std::cos(y)) - std::log(std::cos(fam.b()));
    case ClosedFormFamily::Kind::TiltedGrimReaper: {
      const double scale = 2.0 * fam.b() / kPi;
      return scale * scale * std::log(std::cos(y / scale)) + x * signed_tilt(fam);
    }
  }
  throw std::logic_error("unknown closed-form family");
}

Vec2 gradient(const ClosedFormFamily& fam, double x, double y) {
  (void)x;
  check_strip(fam, y);
  switch (fam.kind()) {
    case ClosedFormFamily::Kind::GrimReaper:
    case ClosedFormFamily::Kind::ShiftedGrimReaper:
      return {0.0, -std::tan(y)};
    case ClosedFormFamily::Kind::TiltedGrimReaper: {
      const double scale = 2.0 * fam.b() / kPi;
      return {signed_tilt(fam), -scale * std::tan(y / scale)};
    }
  }
  throw std::logic_error("unknown closed-form family");
}

double tilt_slope(double b) {
  if (!(b >= kHalfPi)) {
    throw std::domain_error("no complete translating graph over a strip of half-width < pi/2");
  }
  const double s = 2.0 * b / kPi;
  return std::sqrt(s * s - 1.0);
}

}  // namespace translab
