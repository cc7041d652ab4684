#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace ktess {

using Rational = mpq_class;

/// Parses "p/q" or "p" into a canonical rational; throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Planar point with exact rational coordinates.
struct ExactPoint {
  Rational x;
  Rational y;

  ExactPoint() = default;
  ExactPoint(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {
    x.canonicalize();
    y.canonicalize();
  }
  ExactPoint(long x_, long y_) : x(x_), y(y_) {}

  friend bool operator==(const ExactPoint& a, const ExactPoint& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend ExactPoint operator+(const ExactPoint& a, const ExactPoint& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend ExactPoint operator-(const ExactPoint& a, const ExactPoint& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend ExactPoint operator*(const Rational& s, const ExactPoint& a) {
    return {s * a.x, s * a.y};
  }
  friend ExactPoint operator/(const ExactPoint& a, const Rational& s) {
    return {a.x / s, a.y / s};
  }
  ExactPoint& operator+=(const ExactPoint& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double xd() const { return x.get_d(); }
  double yd() const { return y.get_d(); }
};

/// Lexicographic (x, then y) strict ordering for use as a map key.
struct PointLess {
  bool operator()(const ExactPoint& a, const ExactPoint& b) const {
    int c = cmp(a.x, b.x);
    if (c != 0) return c < 0;
    return cmp(a.y, b.y) < 0;
  }
};

Rational dot(const ExactPoint& a, const ExactPoint& b);
Rational cross(const ExactPoint& a, const ExactPoint& b);
Rational norm2(const ExactPoint& a);

/// Sign of the orientation determinant of (a, b, c): +1 ccw, -1 cw, 0 collinear.
int orientation(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c);

struct ExactCircle {
  ExactPoint center;
  Rational r2;  // squared radius, > 0
};

enum class Side { Inside, On, Outside };

/// Circle through three pairwise distinct points; throws CollinearError.
ExactCircle circumcircle(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c);

/// Exact sign of |p - center|^2 - r2.
Side side_of(const ExactCircle& circle, const ExactPoint& p);

/// Interior angle of triangle (a, apex, b) at apex, in (0, pi).
///
/// The cross and dot products of the two legs are formed exactly; the only
/// rounding happens in the conversion feeding the final atan2. Swapping a and
/// b flips the sign of the cross product, which is discarded, so the result
/// is symmetric bit for bit. Throws DegenerateAngleError on collinear input.
double angle_at(const ExactPoint& a, const ExactPoint& apex, const ExactPoint& b);

/// Angle from exact leg products; shared with the scaled-integer kernels.
double angle_from_products(double cross, double dot);

}  // namespace ktess
