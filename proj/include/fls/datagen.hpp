#ifndef FLS_DATAGEN_HPP
#define FLS_DATAGEN_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fls/sequences.hpp"
#include "fls/trig.hpp"

namespace fls {

struct SlopeSpec {
  SequenceSpec seq;
  double radius = 1.0;
  std::size_t J = 1;
  double decay_margin = 1.0;
};

/// A slope function placed on the boundary of the gamma-ellipsoid of the given
/// radius.  The coefficient shape is j^{-(p + 1/2 + eps)} for PP and PE and
/// exp(-j^{2p}/2) / j for EP; `scale` normalizes the first J coefficients so
/// that sum_{j<=J} gamma_j beta_j^2 = radius.
struct Slope {
  SlopeSpec def;
  double scale = 0.0;
  CoefVector coefs = CoefVector::zeros(1);

  /// Coefficient j of the analytic (untruncated) slope, j >= 1.
  double analytic_coef(std::size_t j) const;
  /// sum_{j>J} omega_j beta_j^2, the weighted mass dropped by truncation.
  double omega_tail() const;
};

Slope make_slope(const SlopeSpec &spec);

/// n units in coefficient space; X is stored row-major (unit-major), n x J.
struct Sample {
  std::size_t n = 0;
  std::size_t J = 0;
  std::vector<double> Y;
  std::vector<double> X;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  double x(std::size_t i, std::size_t j) const { return X[i * J + j - 1]; }
  std::span<const double> row(std::size_t i) const {
    return {X.data() + i * J, J};
  }
};

/// Receives unit i with response y and regressor coefficients x (length J).
using UnitVisitor =
    std::function<void(std::size_t i, double y, std::span<const double> x)>;

/// Streams the units of a simulated sample without materializing it.
///
/// [X_i]_j = sqrt(lambda_j) xi_ij and Y_i = sum_j beta_j [X_i]_j + sigma eps_i,
/// with xi, eps i.i.d. standard normal.  Unit i draws eps_i first and then
/// xi_i1..xi_iJ from the substream keyed by (seed, replicate, i).
void simulate_units(const SequenceSpec &spec, const CoefVector &slope,
                    std::size_t n, std::size_t J, double sigma,
                    std::uint64_t seed, std::uint64_t replicate,
                    const UnitVisitor &visit);

/// Materialized form of simulate_units.
Sample simulate(const SequenceSpec &spec, const CoefVector &slope,
                std::size_t n, std::size_t J, double sigma, std::uint64_t seed,
                std::uint64_t replicate = 0);

/// Stationary covariance c(u) = lambda_1 + sum_{2k+1<=J} 2 lambda_{2k}
/// cos(2 pi k u).  Requires paired eigenvalues.
double covariance_kernel(const SequenceSpec &spec, std::size_t J, double u);

/// One row per unit: Y, X_1..X_J.  `comment` becomes the leading '#' line.
void write_sample_csv(std::ostream &out, const Sample &sample,
                      const std::string &comment);

} // namespace fls

#endif
