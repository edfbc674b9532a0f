#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace circlekit {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p", "-p" or "p/q" into a reduced rational. Throws DomainError on malformed input
// or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

inline Integer floor_of(const Rational& x) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

inline Integer ceil_of(const Rational& x) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

// {x} = x - floor(x), always in [0, 1).
inline Rational frac_of(const Rational& x) {
  Rational out = x - Rational(floor_of(x));
  out.canonicalize();
  return out;
}

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(const Integer& x) { return x.get_d(); }

// Nonnegative residue of x modulo m (m > 0) for sizes that fit a machine word.
inline std::int64_t mod_small(const Integer& x, std::int64_t m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
  return static_cast<std::int64_t>(r.get_si());
}

inline bool fits_int64(const Integer& x) {
  return mpz_sizeinbase(x.get_mpz_t(), 2) <= 62;
}

Rational rational_pow(const Rational& x, unsigned e);

}  // namespace circlekit
