#include "fls/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fls/errors.hpp"

namespace fls {

namespace {

void require_index(std::size_t j, const char *what) {
  if (j == 0)
    throw std::domain_error(std::string(what) + ": index must be >= 1");
}

// Sine and cosine of the same frequency share one eigenvalue when pairing is
// enforced: lambda_{2k+1} = lambda_{2k}.
std::size_t paired_index(const SequenceSpec &spec, std::size_t j) {
  if (spec.enforce_pair() && j >= 3 && j % 2 == 1)
    return j - 1;
  return j;
}

double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity())
    return y;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

// numerator / lambda_j, saturating to +inf when lambda_j underflows.
double ratio_or_overflow(const SequenceSpec &spec, std::size_t j,
                         double numerator) {
  const double l = lambda(spec, j);
  if (l > 0.0)
    return numerator / l;
  return std::exp(std::log(numerator) - log_lambda(spec, j));
}

} // namespace

std::string_view to_string(Regime r) noexcept {
  switch (r) {
  case Regime::PP:
    return "PP";
  case Regime::EP:
    return "EP";
  case Regime::PE:
    return "PE";
  }
  return "?";
}

Regime parse_regime(std::string_view text) {
  if (text == "PP")
    return Regime::PP;
  if (text == "EP")
    return Regime::EP;
  if (text == "PE")
    return Regime::PE;
  throw ConfigError("regime: expected one of PP, EP, PE, got '" +
                    std::string(text) + "'");
}

SequenceSpec::SequenceSpec(Regime regime, double a, double p, double s,
                           bool enforce_pair)
    : regime_(regime), a_(a), p_(p), s_(s), enforce_pair_(enforce_pair) {
  if (!std::isfinite(a) || !std::isfinite(p) || !std::isfinite(s))
    throw ConfigError("a, p, s must be finite");
  const std::string tag = "[" + std::string(to_string(regime)) + "] ";
  switch (regime) {
  case Regime::PP:
  case Regime::EP:
    if (!(a > 0.5))
      throw ConfigError(tag + "a: constraint a > 1/2 violated (a = " +
                        std::to_string(a) + ")");
    break;
  case Regime::PE:
    if (!(a > 0.0))
      throw ConfigError(tag + "a: constraint a > 0 violated (a = " +
                        std::to_string(a) + ")");
    break;
  }
  if (regime == Regime::EP) {
    if (!(p > 0.0))
      throw ConfigError(tag + "p: constraint p > 0 violated (p = " +
                        std::to_string(p) + ")");
  } else if (!(p > std::max(0.0, s))) {
    throw ConfigError(tag + "p: constraint p > max(0, s) violated (p = " +
                      std::to_string(p) + ", s = " + std::to_string(s) + ")");
  }
}

double log_omega(const SequenceSpec &spec, std::size_t j) {
  require_index(j, "omega");
  return 2.0 * spec.s() * std::log(static_cast<double>(j));
}

double log_gamma(const SequenceSpec &spec, std::size_t j) {
  require_index(j, "gamma");
  const double x = static_cast<double>(j);
  if (spec.regime() == Regime::EP)
    return std::pow(x, 2.0 * spec.p()) - 1.0;
  return 2.0 * spec.p() * std::log(x);
}

double log_lambda(const SequenceSpec &spec, std::size_t j) {
  require_index(j, "lambda");
  const double x = static_cast<double>(paired_index(spec, j));
  if (spec.regime() == Regime::PE)
    return -std::pow(x, 2.0 * spec.a());
  return -2.0 * spec.a() * std::log(x);
}

double omega(const SequenceSpec &spec, std::size_t j) {
  require_index(j, "omega");
  return std::pow(static_cast<double>(j), 2.0 * spec.s());
}

double gamma(const SequenceSpec &spec, std::size_t j) {
  if (spec.regime() == Regime::EP)
    return std::exp(log_gamma(spec, j));
  require_index(j, "gamma");
  return std::pow(static_cast<double>(j), 2.0 * spec.p());
}

double lambda(const SequenceSpec &spec, std::size_t j) {
  if (spec.regime() == Regime::PE)
    return std::exp(log_lambda(spec, j));
  require_index(j, "lambda");
  return std::pow(static_cast<double>(paired_index(spec, j)), -2.0 * spec.a());
}

WeightVector omega_weights(const SequenceSpec &spec, std::size_t J) {
  std::vector<double> w(J);
  for (std::size_t j = 1; j <= J; ++j)
    w[j - 1] = omega(spec, j);
  return WeightVector(std::move(w));
}

std::vector<double> lambda_values(const SequenceSpec &spec, std::size_t J) {
  std::vector<double> l(J);
  for (std::size_t j = 1; j <= J; ++j)
    l[j - 1] = lambda(spec, j);
  return l;
}

PenaltyScales intrinsic_scales(const SequenceSpec &spec, std::size_t J) {
  if (J == 0)
    throw std::domain_error("intrinsic_scales: J must be >= 1");
  PenaltyScales out;
  out.delta.resize(J);
  out.Delta.resize(J);
  out.kappa.resize(J);
  double Delta = 0.0;
  double kappa = 0.0;
  for (std::size_t m = 1; m <= J; ++m) {
    Delta = std::max(Delta, ratio_or_overflow(spec, m, omega(spec, m)));
    kappa = std::max(kappa,
                     ratio_or_overflow(spec, m, std::max(omega(spec, m), 1.0)));
    const double log_m2 = std::log(static_cast<double>(m) + 2.0);
    const double factor =
        std::abs(std::log(std::max(kappa, static_cast<double>(m) + 2.0)) / log_m2);
    out.Delta[m - 1] = Delta;
    out.kappa[m - 1] = kappa;
    out.delta[m - 1] = static_cast<double>(m) * Delta * factor;
  }
  return out;
}

std::size_t bound_M(const SequenceSpec &spec, const PenaltyScales &scales,
                    std::size_t n) {
  if (n < 1)
    throw std::domain_error("bound_M: n must be >= 1");
  if (scales.size() < n)
    throw std::invalid_argument("bound_M: scales must cover 1..n");
  const double budget = scales.delta[0] * static_cast<double>(n);
  std::size_t best = 1;
  for (std::size_t M = 1; M <= n; ++M)
    if (scales.delta[M - 1] <= budget * std::min(omega(spec, M), 1.0))
      best = M;
  return best;
}

std::size_t bound_N(const SequenceSpec &spec, std::size_t n) {
  if (n < 1)
    throw std::domain_error("bound_N: n must be >= 1");
  const double limit = static_cast<double>(n);
  double running_max = 0.0;
  std::size_t best = 1;
  for (std::size_t N = 1; N <= n; ++N) {
    running_max = std::max(running_max, omega(spec, N));
    if (running_max <= limit)
      best = N;
  }
  return best;
}

std::size_t balance_m_star(const SequenceSpec &spec, std::size_t n) {
  if (n < 1)
    throw std::domain_error("balance_m_star: n must be >= 1");
  const double log_n = std::log(static_cast<double>(n));
  double log_sum = -std::numeric_limits<double>::infinity();
  std::size_t best = 1;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= n; ++m) {
    const double lw = log_omega(spec, m);
    log_sum = log_add_exp(log_sum, lw - log_lambda(spec, m));
    const double value = std::abs(log_gamma(spec, m) - log_n - lw + log_sum);
    if (value < best_value) {
      best_value = value;
      best = m;
    }
  }
  return best;
}

std::size_t balance_m_dagger(const SequenceSpec &spec,
                             const PenaltyScales &scales, std::size_t n) {
  if (n < 1)
    throw std::domain_error("balance_m_dagger: n must be >= 1");
  if (scales.size() < n)
    throw std::invalid_argument("balance_m_dagger: scales must cover 1..n");
  const double log_n = std::log(static_cast<double>(n));
  std::size_t best = 1;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= n; ++m) {
    const double value =
        std::abs(log_gamma(spec, m) + std::log(scales.delta[m - 1]) - log_n -
                 log_omega(spec, m));
    if (value < best_value) {
      best_value = value;
      best = m;
    }
  }
  return best;
}

double theoretical_rate(const SequenceSpec &spec, double n) {
  if (!(n > 1.0))
    throw std::domain_error("theoretical_rate: n must exceed 1");
  const double a = spec.a(), p = spec.p(), s = spec.s();
  const double log_n = std::log(n);
  const double e = 2.0 * s + 2.0 * a + 1.0;
  switch (spec.regime()) {
  case Regime::PP:
    if (e == 0.0)
      return log_n / n;
    if (e < 0.0)
      return 1.0 / n;
    return std::max(std::pow(n, -(2.0 * p - 2.0 * s) / (2.0 * a + 2.0 * p + 1.0)),
                    1.0 / n);
  case Regime::EP:
    if (e == 0.0)
      return std::log(log_n) / n;
    if (e < 0.0)
      return 1.0 / n;
    return std::pow(log_n, e / (2.0 * p)) / n;
  case Regime::PE:
    return std::pow(log_n, -(p - s) / a);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double summability_check(const PenaltyScales &scales, std::size_t J) {
  if (J == 0)
    throw std::domain_error("summability_check: J must be >= 1");
  if (scales.size() < J)
    throw std::invalid_argument("summability_check: scales must cover 1..J");
  double sum = 0.0;
  for (std::size_t m = 0; m < J; ++m) {
    const double D = scales.Delta[m];
    if (!std::isfinite(D) || !std::isfinite(scales.delta[m]))
      throw std::domain_error("summability_check: scale overflow at m = " +
                              std::to_string(m + 1));
    sum += D * std::exp(-scales.delta[m] / (6.0 * D));
  }
  return sum;
}

} // namespace fls
