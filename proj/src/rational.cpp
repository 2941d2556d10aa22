#include "rlab/rational.hpp"

#include <cmath>
#include <limits>

#include "rlab/error.hpp"

namespace rlab {

mpq_class pow_q(const mpq_class& base, unsigned long exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

mpz_class factorial_z(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

mpz_class falling_z(long x, long t) {
  mpz_class out = 1;
  for (long i = 0; i < t; ++i) out *= (x - i);
  return out;
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw Error(ErrorKind::InvalidInput, "empty number");
  mpq_class out;
  const auto slash = text.find('/');
  const auto dot = text.find('.');
  try {
    if (slash != std::string::npos) {
      out = mpq_class(text);
    } else if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const std::size_t decimals = text.size() - dot - 1;
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
      if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad decimal");
      if (digits.front() == '+') digits.erase(0, 1);
      out = mpq_class(mpz_class(digits), den);
    } else {
      std::string digits = text.front() == '+' ? text.substr(1) : text;
      out = mpq_class(mpz_class(digits));
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::InvalidInput, "not a rational number: '" + text + "'");
  }
  if (out.get_den() == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + text + "'");
  out.canonicalize();
  return out;
}

namespace {

double log_z(const mpz_class& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

double log_q(const mpq_class& q) {
  if (q == 0) return -std::numeric_limits<double>::infinity();
  if (q < 0) throw Error(ErrorKind::InvalidInput, "log of a negative number");
  return log_z(q.get_num()) - log_z(q.get_den());
}

}  // namespace rlab
