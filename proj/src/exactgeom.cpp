#include "ktess/exactgeom.hpp"

#include <cmath>
#include <stdexcept>

#include "ktess/errors.hpp"

namespace ktess {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char ch : s) {
    bool ok = (ch >= '0' && ch <= '9') || ch == '-' || ch == '+' || ch == '/';
    if (!ok) throw std::invalid_argument("not a rational literal: " + s);
  }
  if (s.front() == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational dot(const ExactPoint& a, const ExactPoint& b) { return a.x * b.x + a.y * b.y; }

Rational cross(const ExactPoint& a, const ExactPoint& b) { return a.x * b.y - a.y * b.x; }

Rational norm2(const ExactPoint& a) { return a.x * a.x + a.y * a.y; }

int orientation(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c) {
  return sgn(cross(b - a, c - a));
}

ExactCircle circumcircle(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c) {
  // Solve 2 (b-a).x = |b-a|^2 and 2 (c-a).x = |c-a|^2 for the offset x of the
  // center from a.
  ExactPoint u = b - a;
  ExactPoint v = c - a;
  Rational det = cross(u, v);
  if (sgn(det) == 0) throw CollinearError();
  Rational nu = norm2(u);
  Rational nv = norm2(v);
  Rational two_det = 2 * det;
  ExactPoint offset{(nu * v.y - nv * u.y) / two_det, (nv * u.x - nu * v.x) / two_det};
  ExactCircle circle{a + offset, norm2(offset)};
  return circle;
}

Side side_of(const ExactCircle& circle, const ExactPoint& p) {
  int s = cmp(norm2(p - circle.center), circle.r2);
  if (s < 0) return Side::Inside;
  if (s == 0) return Side::On;
  return Side::Outside;
}

double angle_from_products(double cross_value, double dot_value) {
  return std::atan2(std::fabs(cross_value), dot_value);
}

double angle_at(const ExactPoint& a, const ExactPoint& apex, const ExactPoint& b) {
  ExactPoint u = a - apex;
  ExactPoint v = b - apex;
  Rational c = cross(u, v);
  if (sgn(c) == 0) throw DegenerateAngleError();
  Rational d = dot(u, v);
  return angle_from_products(c.get_d(), d.get_d());
}

}  // namespace ktess
