#pragma once

#include <string>

#include "json.hpp"
#include "ktess/exactgeom.hpp"

namespace ktess::detail {

/// Integer as a JSON number when it fits 64 bits, else as a decimal string.
inline nlohmann::json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return nlohmann::json(static_cast<long long>(z.get_si()));
  return nlohmann::json(z.get_str());
}

inline mpz_class integer_from_json(const nlohmann::json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  throw std::invalid_argument("expected an integer in JSON");
}

inline nlohmann::json rational_json(const Rational& q) {
  return nlohmann::json::array({integer_json(q.get_num()), integer_json(q.get_den())});
}

inline Rational rational_from(const nlohmann::json& num, const nlohmann::json& den) {
  mpz_class d = integer_from_json(den);
  if (d == 0) throw std::invalid_argument("zero denominator in JSON");
  Rational q(integer_from_json(num), d);
  q.canonicalize();
  return q;
}

}  // namespace ktess::detail
