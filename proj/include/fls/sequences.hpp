#ifndef FLS_SEQUENCES_HPP
#define FLS_SEQUENCES_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fls/trig.hpp"

namespace fls {

/// Decay families of the smoothness weights gamma and the eigenvalues lambda.
///   PP: gamma_j = j^{2p},          lambda_j = j^{-2a}
///   EP: gamma_j = exp(j^{2p} - 1), lambda_j = j^{-2a}
///   PE: gamma_j = j^{2p},          lambda_j = exp(-j^{2a})
/// The risk weights are omega_j = j^{2s} in every regime.
enum class Regime { PP, EP, PE };

std::string_view to_string(Regime r) noexcept;
/// Throws ConfigError on anything but "PP", "EP" or "PE".
Regime parse_regime(std::string_view text);

/// Parametric description of omega, gamma and lambda.  Parameter constraints
/// are checked on construction and reported as ConfigError.
class SequenceSpec {
public:
  SequenceSpec(Regime regime, double a, double p, double s,
               bool enforce_pair = true);

  Regime regime() const noexcept { return regime_; }
  double a() const noexcept { return a_; }
  double p() const noexcept { return p_; }
  double s() const noexcept { return s_; }
  bool enforce_pair() const noexcept { return enforce_pair_; }

private:
  Regime regime_;
  double a_, p_, s_;
  bool enforce_pair_;
};

double omega(const SequenceSpec &spec, std::size_t j);
double gamma(const SequenceSpec &spec, std::size_t j);
double lambda(const SequenceSpec &spec, std::size_t j);

// Natural logs of the above; finite even where the sequences themselves
// overflow or underflow a double.
double log_omega(const SequenceSpec &spec, std::size_t j);
double log_gamma(const SequenceSpec &spec, std::size_t j);
double log_lambda(const SequenceSpec &spec, std::size_t j);

WeightVector omega_weights(const SequenceSpec &spec, std::size_t J);
std::vector<double> lambda_values(const SequenceSpec &spec, std::size_t J);

/// delta_m, Delta_m and kappa_m for m = 1..size(), stored zero-based.
struct PenaltyScales {
  std::vector<double> delta;
  std::vector<double> Delta;
  std::vector<double> kappa;

  std::size_t size() const noexcept { return delta.size(); }
};

/// Delta_m = max_{j<=m} omega_j/lambda_j,
/// kappa_m = max_{j<=m} max(omega_j, 1)/lambda_j,
/// delta_m = m Delta_m |log(max(kappa_m, m+2)) / log(m+2)|.
/// Entries overflow to +inf once omega_j/lambda_j leaves double range.
PenaltyScales intrinsic_scales(const SequenceSpec &spec, std::size_t J);

/// Largest M in 1..n with delta_M <= delta_1 n min(omega_M, 1).
std::size_t bound_M(const SequenceSpec &spec, const PenaltyScales &scales,
                    std::size_t n);

/// Largest N in 1..n with max_{j<=N} omega_j <= n.
std::size_t bound_N(const SequenceSpec &spec, std::size_t n);

/// Minimizer over m in 1..n of |log(gamma_m/(n omega_m) sum_{j<=m}
/// omega_j/lambda_j)|, smallest m on ties.
std::size_t balance_m_star(const SequenceSpec &spec, std::size_t n);

/// Minimizer over m in 1..n of |log(gamma_m delta_m/(n omega_m))|.
std::size_t balance_m_dagger(const SequenceSpec &spec,
                             const PenaltyScales &scales, std::size_t n);

/// Closed-form optimal rate for the regime (reference line for risk plots).
double theoretical_rate(const SequenceSpec &spec, double n);

/// Partial sum sum_{m<=J} Delta_m exp(-delta_m / (6 Delta_m)).
double summability_check(const PenaltyScales &scales, std::size_t J);

} // namespace fls

#endif
