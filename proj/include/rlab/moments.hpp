#pragma once

// First-moment formulas, threshold functions and the extremal inequality
// used for tight cycles. Everything beyond tiny n is evaluated in natural-log
// space; the exact rational path exists for cross-checks.

#include <string>
#include <utility>

#include <gmpxx.h>

#include "rlab/core.hpp"

namespace rlab {

enum class ThresholdSide { Below, Above };

// Color density c = r/n kept as an exact fraction.
struct ColorDensity {
  long num = 1;
  long den = 1;

  static ColorDensity parse(const std::string& text);  // "1/2", "2", "1.1"
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  long colors_for(long n) const;  // floor(c n), exactly
};

struct MomentParams {
  CycleSpec spec;
  double p = 0.0;
  long r = 0;

  double c() const { return static_cast<double>(r) / spec.n; }
};

// n! p^m (r)_m / r^m as an exact rational (zero when r < m).
mpq_class exact_expected_Y(const CycleSpec& spec, const mpq_class& p, long r);

// Natural log of E(Y) through log-gamma; -inf when p = 0 or r < m. Accepts
// n up to 10^6 (the spec is not checked against the 64-vertex cap).
double log_expected_Y(long n, int k, int ell, double p, long r);
inline double log_expected_Y(const MomentParams& mp) {
  return log_expected_Y(mp.spec.n, mp.spec.k, mp.spec.ell, mp.p, mp.r);
}

enum class AsymptoticBranch {
  Auto,          // pick by c
  MinimalColors, // c = 1/(k-ell)
  ExtraColors,   // c > 1/(k-ell)
};

// Stirling approximation of log E(Y):
//   c > 1/(k-l): 1/2 log(2 pi n r / (r - n/(k-l)))
//                + n [log n + log p/(k-l) - 1 - 1/(k-l) + (c - 1/(k-l)) log(c/(c - 1/(k-l)))]
//   c = 1/(k-l): log(2 pi n sqrt(1/(k-l))) + n [log n + log p/(k-l) - 1 - 1/(k-l)]
// Throws InvalidInput for c < 1/(k-l), p <= 0, or ExtraColors at c = 1/(k-l).
double asymptotic_log_expected_Y(long n, int k, int ell, double p, long r,
                                 AsymptoticBranch branch = AsymptoticBranch::Auto);

// Not-rainbow-Hamiltonian threshold for k > ell >= 2, without (1 +- eps):
//   e^{k-l+1} / n^{k-l}                                  if c = 1/(k-l)
//   ((c - 1/(k-l))/c)^{(k-l)c - 1} e^{k-l+1} / n^{k-l}   if c > 1/(k-l)
double threshold_general(int k, int ell, double c, double n);

// Tight-cycle sharp threshold for k >= 4: e^2/n (c = 1) or ((c-1)/c)^{c-1} e^2/n.
double threshold_tight(int k, double c, double n);

// (1 - eps) for Below, (1 + eps) for Above.
double scale_threshold(double threshold, ThresholdSide side, double eps);

// Prior-work sufficient conditions, p >= omega / n^{k-2} (ell = 2) and
// p >= omega log n / n^{k-1} (loose). omega is supplied by the caller.
bool meets_omega_dense(double p, double n, int k, double omega);
bool meets_omega_loose(double p, double n, int k, double omega);

// K = 4 k! k e^{k+1}.
double K_constant(int k);

// ((c-x)/c)^{(c-x)/x} for c > x > 0, in log space.
double claim_f(double c, double x);

// -sign(log(1 - x/c) + x/c): the sign of d/dx claim_f.
int claim_derivative_sign(double c, double x);

struct ClaimMax {
  long b = 0;
  double value = 0.0;
};

// max over integer b in [1, n] of ((r-b)/r)^{(r-b)/b} with r = c n, by scan.
ClaimMax claim_max(double c, long n);

// ((c-1)/c)^{c-1}, with the value 1 at c = 1.
double tight_prefactor(double c);

}  // namespace rlab
