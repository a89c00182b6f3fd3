#ifndef FLS_TRIG_HPP
#define FLS_TRIG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace fls {

/// Coefficients c_1..c_J of f = sum_j c_j phi_j in the trigonometric basis.
///
/// Storage is zero-based: element 0 holds the coefficient of the constant
/// function phi_1, element 2k-1 the cosine of frequency k and element 2k the
/// sine of frequency k.
class CoefVector {
public:
  explicit CoefVector(std::vector<double> coefs);
  static CoefVector zeros(std::size_t J);

  std::size_t size() const noexcept { return coefs_.size(); }
  double operator[](std::size_t i) const noexcept { return coefs_[i]; }
  /// One-based access matching the basis index j.
  double coef(std::size_t j) const;
  std::span<const double> values() const noexcept { return coefs_; }

private:
  std::vector<double> coefs_;
};

/// Strictly positive weights w_1..w_J with w_1 = 1.
class WeightVector {
public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector ones(std::size_t J);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }

private:
  std::vector<double> weights_;
};

/// phi_1 = 1, phi_{2k} = sqrt(2) cos(2 pi k t), phi_{2k+1} = sqrt(2) sin(2 pi k t).
double basis_eval(std::size_t j, double t);

/// Evaluates sum_j c_j phi_j(t) for t in [0, 1].
double function_eval(const CoefVector &f, double t);

// Lengths that disagree are zero-padded: terms beyond the shorter operand
// vanish.
double weighted_norm_sq(const CoefVector &f, const WeightVector &w);
double weighted_inner(const CoefVector &f, const CoefVector &g,
                      const WeightVector &w);

} // namespace fls

#endif
