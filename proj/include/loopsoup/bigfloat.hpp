// bigfloat.hpp — runtime-variable precision reals for the cumulant recursion.
//
// boost::multiprecision::mpfr_float with thread-local default precision.
// Callers bracket multiprecision work in a PrecisionGuard so temporaries pick
// up the requested mantissa width; stored values keep whatever precision they
// were computed at.
#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>

namespace loopsoup::bf {

using Real = boost::multiprecision::mpfr_float;

inline unsigned digits10_for_bits(int bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
}

class PrecisionGuard {
 public:
  explicit PrecisionGuard(int bits) : saved_(Real::default_precision()) {
    Real::default_precision(digits10_for_bits(bits));
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

}  // namespace loopsoup::bf
