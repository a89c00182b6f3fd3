#include "fls/trig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fls {

CoefVector::CoefVector(std::vector<double> coefs) : coefs_(std::move(coefs)) {
  if (coefs_.empty())
    throw std::invalid_argument("CoefVector: length must be >= 1");
  for (double c : coefs_)
    if (!std::isfinite(c))
      throw std::invalid_argument("CoefVector: non-finite coefficient");
}

CoefVector CoefVector::zeros(std::size_t J) {
  return CoefVector(std::vector<double>(J, 0.0));
}

double CoefVector::coef(std::size_t j) const {
  if (j == 0 || j > coefs_.size())
    throw std::out_of_range("CoefVector: index " + std::to_string(j) +
                            " outside 1.." + std::to_string(coefs_.size()));
  return coefs_[j - 1];
}

WeightVector::WeightVector(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty())
    throw std::invalid_argument("WeightVector: length must be >= 1");
  if (weights_.front() != 1.0)
    throw std::invalid_argument("WeightVector: w_1 must equal 1");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument(
          "WeightVector: weights must be finite and > 0");
}

WeightVector WeightVector::ones(std::size_t J) {
  return WeightVector(std::vector<double>(J, 1.0));
}

double basis_eval(std::size_t j, double t) {
  if (j == 0)
    throw std::domain_error("basis_eval: index j must be >= 1");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("basis_eval: t must lie in [0, 1]");
  if (j == 1)
    return 1.0;
  const double k = static_cast<double>(j / 2);
  const double arg = 2.0 * std::numbers::pi * k * t;
  return std::numbers::sqrt2 * (j % 2 == 0 ? std::cos(arg) : std::sin(arg));
}

double function_eval(const CoefVector &f, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("function_eval: t must lie in [0, 1]");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    sum += f[i] * basis_eval(i + 1, t);
  return sum;
}

double weighted_norm_sq(const CoefVector &f, const WeightVector &w) {
  const std::size_t J = std::min(f.size(), w.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < J; ++i)
    sum += w[i] * f[i] * f[i];
  return sum;
}

double weighted_inner(const CoefVector &f, const CoefVector &g,
                      const WeightVector &w) {
  const std::size_t J = std::min({f.size(), g.size(), w.size()});
  double sum = 0.0;
  for (std::size_t i = 0; i < J; ++i)
    sum += w[i] * f[i] * g[i];
  return sum;
}

} // namespace fls
