#pragma once

#include <cstdint>

namespace ktess::detail {

using i128 = __int128;
using u128 = unsigned __int128;

/// 256-bit unsigned product of two 128-bit magnitudes.
struct U256 {
  u128 hi;
  u128 lo;
};

inline U256 mul_wide(u128 a, u128 b) {
  const u128 mask = ~std::uint64_t{0};
  u128 a0 = a & mask, a1 = a >> 64;
  u128 b0 = b & mask, b1 = b >> 64;
  u128 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
  u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  return {p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64), (mid << 64) | (p00 & mask)};
}

inline int compare(const U256& x, const U256& y) {
  if (x.hi != y.hi) return x.hi < y.hi ? -1 : 1;
  if (x.lo != y.lo) return x.lo < y.lo ? -1 : 1;
  return 0;
}

/// num / den with den > 0; both below 2^127 in magnitude.
struct Fraction {
  i128 num;
  i128 den;
};

inline int sign(i128 v) { return (v > 0) - (v < 0); }

inline int compare(const Fraction& p, const Fraction& q) {
  int sp = sign(p.num), sq = sign(q.num);
  if (sp != sq) return sp < sq ? -1 : 1;
  if (sp == 0) return 0;
  u128 mp = static_cast<u128>(sp > 0 ? p.num : -p.num);
  u128 mq = static_cast<u128>(sq > 0 ? q.num : -q.num);
  int c = compare(mul_wide(mp, static_cast<u128>(q.den)), mul_wide(mq, static_cast<u128>(p.den)));
  return sp > 0 ? c : -c;
}

}  // namespace ktess::detail
