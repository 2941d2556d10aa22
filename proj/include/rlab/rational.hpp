#pragma once

#include <string>

#include <gmpxx.h>

namespace rlab {

mpq_class pow_q(const mpq_class& base, unsigned long exponent);

mpz_class factorial_z(unsigned long n);

// (x)_t = x (x-1) ... (x-t+1); zero when t > x >= 0.
mpz_class falling_z(long x, long t);

// Accepts "a/b", integers and plain decimals ("0.05"), exactly.
mpq_class parse_rational(const std::string& text);

// Natural log of a positive rational, accurate for huge numerators and
// denominators; -inf for zero.
double log_q(const mpq_class& q);

}  // namespace rlab
