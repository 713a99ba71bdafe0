#include "textcoherence/student_t.hpp"

#include <cmath>
#include <limits>

#include "textcoherence/error.hpp"

namespace textcoherence {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 200000;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw InvalidArgument("incomplete beta: continued fraction did not converge");
}

// ln I_x(a, b) on the branch where the continued fraction converges directly.
// `log_x` and `log_1mx` are passed separately so callers can supply
// complements without cancellation.
double log_ibeta_direct(double a, double b, double x, double log_x, double log_1mx) {
  const double front = a * log_x + b * log_1mx - log_beta(a, b) - std::log(a);
  return front + std::log(beta_continued_fraction(a, b, x));
}

}  // namespace

double log_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta: parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x == 1.0) return 0.0;
  const double log_x = std::log(x);
  const double log_1mx = std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return log_ibeta_direct(a, b, x, log_x, log_1mx);
  const double complement = std::exp(log_ibeta_direct(b, a, 1.0 - x, log_1mx, log_x));
  return std::log1p(-complement);
}

TailProbability student_t_two_tailed(double t, double dof) {
  if (!(dof > 0.0)) throw InvalidArgument("student t: degrees of freedom must be positive");
  if (std::isnan(t)) throw InvalidArgument("student t: t is NaN");
  constexpr double kLn10 = 2.302585092994045684;
  TailProbability out;
  if (t == 0.0) return out;
  if (std::isinf(t)) {
    out.p = 0.0;
    out.log10_p = -std::numeric_limits<double>::infinity();
    return out;
  }

  // p = I_x(dof/2, 1/2) with x = dof / (dof + t^2); 1 - x = t^2 / (dof + t^2).
  const double a = 0.5 * dof;
  const double b = 0.5;
  const double t2 = t * t;
  double log_x;
  double log_1mx;
  double x;
  double one_minus_x;
  if (std::isinf(t2)) {
    // |t| beyond sqrt(DBL_MAX): work with logs only.
    const double log_t2 = 2.0 * std::log(std::fabs(t));
    log_x = std::log(dof) - log_t2;
    log_1mx = 0.0;
    x = std::exp(log_x);
    one_minus_x = 1.0;
  } else {
    x = dof / (dof + t2);
    one_minus_x = t2 / (dof + t2);
    log_x = -std::log1p(t2 / dof);
    log_1mx = -std::log1p(dof / t2);
  }

  double log_p;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    log_p = log_ibeta_direct(a, b, x, log_x, log_1mx);
  } else {
    const double complement = std::exp(log_ibeta_direct(b, a, one_minus_x, log_1mx, log_x));
    log_p = std::log1p(-complement);
  }
  log_p = std::min(log_p, 0.0);
  out.p = std::exp(log_p);
  out.log10_p = log_p / kLn10;
  return out;
}

}  // namespace textcoherence
