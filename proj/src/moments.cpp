#include "rlab/moments.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rlab/rational.hpp"

namespace rlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shape(long n, int k, int ell) {
  if (k < 2 || ell < 1 || ell >= k || n <= k || n % (k - ell) != 0) {
    throw Error(ErrorKind::InvalidSpec, "invalid (n, k, ell)");
  }
}

}  // namespace

ColorDensity ColorDensity::parse(const std::string& text) {
  const mpq_class q = parse_rational(text);
  if (q <= 0) throw Error(ErrorKind::InvalidInput, "color density must be positive");
  if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) {
    throw Error(ErrorKind::InvalidInput, "color density too large");
  }
  return {q.get_num().get_si(), q.get_den().get_si()};
}

long ColorDensity::colors_for(long n) const { return (num * n) / den; }

mpq_class exact_expected_Y(const CycleSpec& spec, const mpq_class& p, long r) {
  if (p < 0 || p > 1) throw Error(ErrorKind::InvalidInput, "p must lie in [0, 1]");
  if (r < spec.m) return 0;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(spec.m));
  mpq_class rainbow(falling_z(r, spec.m), den);
  rainbow.canonicalize();
  return mpq_class(factorial_z(static_cast<unsigned long>(spec.n))) * pow_q(p, static_cast<unsigned long>(spec.m)) *
         rainbow;
}

double log_expected_Y(long n, int k, int ell, double p, long r) {
  check_shape(n, k, ell);
  if (p < 0.0 || p > 1.0) throw Error(ErrorKind::InvalidInput, "p must lie in [0, 1]");
  const long m = n / (k - ell);
  if (p == 0.0 || r < m) return -kInf;
  const auto dn = static_cast<double>(n);
  const auto dm = static_cast<double>(m);
  const auto dr = static_cast<double>(r);
  return std::lgamma(dn + 1.0) + dm * std::log(p) + std::lgamma(dr + 1.0) - std::lgamma(dr - dm + 1.0) -
         dm * std::log(dr);
}

double asymptotic_log_expected_Y(long n, int k, int ell, double p, long r, AsymptoticBranch branch) {
  check_shape(n, k, ell);
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidInput, "asymptotics need p > 0");
  const long s = k - ell;
  const long m = n / s;
  if (r < m) throw Error(ErrorKind::InvalidInput, "c < 1/(k-ell)");
  const bool minimal = r == m;
  if (branch == AsymptoticBranch::Auto) branch = minimal ? AsymptoticBranch::MinimalColors : AsymptoticBranch::ExtraColors;
  if (branch == AsymptoticBranch::ExtraColors && minimal) {
    throw Error(ErrorKind::InvalidInput, "c = 1/(k-ell): the extra-colors prefactor diverges");
  }
  if (branch == AsymptoticBranch::MinimalColors && !minimal) {
    throw Error(ErrorKind::InvalidInput, "minimal-colors branch needs r = n/(k-ell)");
  }

  const auto dn = static_cast<double>(n);
  const auto ds = static_cast<double>(s);
  const auto dr = static_cast<double>(r);
  const double base = std::log(dn) + std::log(p) / ds - 1.0 - 1.0 / ds;
  if (branch == AsymptoticBranch::MinimalColors) {
    return std::log(2.0 * std::numbers::pi * dn * std::sqrt(1.0 / ds)) + dn * base;
  }
  const double c = dr / dn;
  const double excess = c - 1.0 / ds;
  return 0.5 * std::log(2.0 * std::numbers::pi * dn * dr / (dr - dn / ds)) +
         dn * (base + excess * std::log(c / excess));
}

double threshold_general(int k, int ell, double c, double n) {
  if (!(k > ell && ell >= 2)) throw Error(ErrorKind::InvalidInput, "threshold_general needs k > ell >= 2");
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidInput, "n must be positive");
  const double s = k - ell;
  if (c < 1.0 / s) throw Error(ErrorKind::InvalidInput, "need c >= 1/(k-ell)");
  const double base = std::exp(s + 1.0) / std::pow(n, s);
  if (c == 1.0 / s) return base;
  // ((c - 1/s)/c)^{sc - 1}
  return std::exp((s * c - 1.0) * std::log1p(-1.0 / (s * c))) * base;
}

double tight_prefactor(double c) {
  if (c < 1.0) throw Error(ErrorKind::InvalidInput, "need c >= 1");
  if (c == 1.0) return 1.0;
  return std::exp((c - 1.0) * std::log1p(-1.0 / c));
}

double threshold_tight(int k, double c, double n) {
  if (k < 4) throw Error(ErrorKind::InvalidInput, "threshold_tight needs k >= 4");
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidInput, "n must be positive");
  return tight_prefactor(c) * std::exp(2.0) / n;
}

double scale_threshold(double threshold, ThresholdSide side, double eps) {
  return threshold * (side == ThresholdSide::Below ? 1.0 - eps : 1.0 + eps);
}

bool meets_omega_dense(double p, double n, int k, double omega) { return p >= omega / std::pow(n, k - 2); }

bool meets_omega_loose(double p, double n, int k, double omega) {
  return p >= omega * std::log(n) / std::pow(n, k - 1);
}

double K_constant(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "need k >= 1");
  return 4.0 * std::tgamma(k + 1.0) * k * std::exp(k + 1.0);
}

double claim_f(double c, double x) {
  if (!(x > 0.0 && c > x)) throw Error(ErrorKind::InvalidInput, "claim_f needs c > x > 0");
  return std::exp(((c - x) / x) * std::log1p(-x / c));
}

int claim_derivative_sign(double c, double x) {
  if (!(x > 0.0 && c > x)) throw Error(ErrorKind::InvalidInput, "claim_derivative_sign needs c > x > 0");
  const double inner = std::log1p(-x / c) + x / c;
  return inner < 0.0 ? 1 : (inner > 0.0 ? -1 : 0);
}

ClaimMax claim_max(double c, long n) {
  if (!(c > 1.0)) throw Error(ErrorKind::InvalidInput, "claim_max needs c > 1");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "claim_max needs n >= 1");
  const double r = c * static_cast<double>(n);
  ClaimMax best{0, -kInf};
  for (long b = 1; b <= n; ++b) {
    const auto db = static_cast<double>(b);
    const double value = std::exp(((r - db) / db) * std::log1p(-db / r));
    if (value >= best.value) best = {b, value};
  }
  return best;
}

}  // namespace rlab
