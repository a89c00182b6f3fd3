#include "fls/datagen.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>
#include <gsl/gsl_sf_zeta.h>

#include "fls/csv.hpp"
#include "fls/rng.hpp"

namespace fls {

namespace {

// log of the unnormalized coefficient shape u_j.
double log_shape(const SlopeSpec &def, std::size_t j) {
  const double x = static_cast<double>(j);
  const double p = def.seq.p();
  if (def.seq.regime() == Regime::EP)
    return -0.5 * std::pow(x, 2.0 * p) - std::log(x);
  return -(p + 0.5 + def.decay_margin) * std::log(x);
}

} // namespace

double Slope::analytic_coef(std::size_t j) const {
  if (j == 0)
    throw std::domain_error("analytic_coef: index must be >= 1");
  return scale * std::exp(log_shape(def, j));
}

double Slope::omega_tail() const {
  const SequenceSpec &seq = def.seq;
  const std::size_t J = coefs.size();
  if (seq.regime() != Regime::EP) {
    // omega_j u_j^2 = j^{-q} with q = 2p + 1 + 2 eps - 2s > 1.
    const double q = 2.0 * seq.p() + 1.0 + 2.0 * def.decay_margin - 2.0 * seq.s();
    return scale * scale * gsl_sf_hzeta(q, static_cast<double>(J + 1));
  }
  // Stretched-exponential decay: sum until the terms stop mattering.
  double sum = 0.0;
  const std::size_t cap = J + 10'000'000;
  for (std::size_t j = J + 1; j <= cap; ++j) {
    const double term =
        std::exp(log_omega(seq, j) + 2.0 * log_shape(def, j)) * scale * scale;
    sum += term;
    if (term == 0.0 || (j > J + 16 && term <= sum * 1e-18))
      break;
  }
  return sum;
}

Slope make_slope(const SlopeSpec &spec) {
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
    throw std::domain_error("make_slope: radius must be > 0");
  if (!(spec.decay_margin > 0.0))
    throw std::domain_error("make_slope: decay margin must be > 0");
  if (spec.J == 0)
    throw std::domain_error("make_slope: J must be >= 1");
  double norm = 0.0;
  for (std::size_t j = 1; j <= spec.J; ++j)
    norm += std::exp(log_gamma(spec.seq, j) + 2.0 * log_shape(spec, j));
  Slope out{spec, std::sqrt(spec.radius / norm), CoefVector::zeros(1)};
  std::vector<double> c(spec.J);
  for (std::size_t j = 1; j <= spec.J; ++j)
    c[j - 1] = out.analytic_coef(j);
  out.coefs = CoefVector(std::move(c));
  return out;
}

void simulate_units(const SequenceSpec &spec, const CoefVector &slope,
                    std::size_t n, std::size_t J, double sigma,
                    std::uint64_t seed, std::uint64_t replicate,
                    const UnitVisitor &visit) {
  if (n == 0)
    throw std::domain_error("simulate: n must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::domain_error("simulate: sigma must be >= 0");
  if (slope.size() > J)
    throw std::domain_error("simulate: slope has " +
                            std::to_string(slope.size()) +
                            " coefficients but only J = " + std::to_string(J) +
                            " are simulated");
  std::vector<double> sd(J);
  for (std::size_t j = 1; j <= J; ++j)
    sd[j - 1] = std::exp(0.5 * log_lambda(spec, j));
  const std::size_t K = slope.size();

  std::vector<double> x(J);
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 gen(substream_seed(seed, replicate, i));
    boost::random::normal_distribution<double> normal;
    const double eps = normal(gen);
    for (std::size_t j = 0; j < J; ++j)
      x[j] = sd[j] * normal(gen);
    double y = 0.0;
    for (std::size_t j = 0; j < K; ++j)
      y += slope[j] * x[j];
    y += sigma * eps;
    visit(i, y, x);
  }
}

Sample simulate(const SequenceSpec &spec, const CoefVector &slope,
                std::size_t n, std::size_t J, double sigma, std::uint64_t seed,
                std::uint64_t replicate) {
  Sample s;
  s.n = n;
  s.J = J;
  s.sigma = sigma;
  s.seed = seed;
  s.replicate = replicate;
  s.Y.resize(n);
  s.X.resize(n * J);
  simulate_units(spec, slope, n, J, sigma, seed, replicate,
                 [&](std::size_t i, double y, std::span<const double> x) {
                   s.Y[i] = y;
                   std::copy(x.begin(), x.end(), s.X.begin() + i * J);
                 });
  return s;
}

double covariance_kernel(const SequenceSpec &spec, std::size_t J, double u) {
  if (!spec.enforce_pair())
    throw std::domain_error(
        "covariance_kernel: requires paired (stationary) eigenvalues");
  if (J == 0)
    throw std::domain_error("covariance_kernel: J must be >= 1");
  double c = lambda(spec, 1);
  for (std::size_t k = 1; 2 * k + 1 <= J; ++k)
    c += 2.0 * lambda(spec, 2 * k) *
         std::cos(2.0 * std::numbers::pi * static_cast<double>(k) * u);
  return c;
}

void write_sample_csv(std::ostream &out, const Sample &sample,
                      const std::string &comment) {
  out << "# " << comment << '\n';
  out << 'Y';
  for (std::size_t j = 1; j <= sample.J; ++j)
    out << ",X_" << j;
  out << '\n';
  for (std::size_t i = 0; i < sample.n; ++i) {
    out << format_double(sample.Y[i]);
    for (double v : sample.row(i))
      out << ',' << format_double(v);
    out << '\n';
  }
}

} // namespace fls
