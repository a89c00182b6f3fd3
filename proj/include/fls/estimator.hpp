#ifndef FLS_ESTIMATOR_HPP
#define FLS_ESTIMATOR_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fls/datagen.hpp"
#include "fls/sequences.hpp"
#include "fls/trig.hpp"

namespace fls {

inline constexpr double kDefaultEta = 3.0;
inline constexpr double kPenaltyConstKnown = 192.0;
inline constexpr double kPenaltyConstUnknown = 1920.0;

/// Empirical moments [g^]_j = (1/n) sum_i Y_i [X_i]_j,
/// lambda^_j = (1/n) sum_i [X_i]_j^2 and sigma_Y^2^.
struct SampleMoments {
  std::vector<double> ghat;
  std::vector<double> lhat;
  double sigmaY2_hat = 0.0;
  std::size_t n = 0;

  std::size_t J() const noexcept { return ghat.size(); }
  /// lambda^_j >= 1/n, the spectral cut-off applied to coordinate j (1-based).
  bool passes_threshold(std::size_t j) const {
    return lhat[j - 1] >= 1.0 / static_cast<double>(n);
  }
};

/// Accumulates moments unit by unit in index order; feeding the units of a
/// Sample reproduces moments(sample) bit for bit.
class MomentAccumulator {
public:
  MomentAccumulator(std::size_t J, bool centered_sigma = false);
  void add(double y, std::span<const double> x);
  SampleMoments finish() const;

private:
  std::vector<double> gsum_, lsum_;
  double ysum_ = 0.0, y2sum_ = 0.0;
  std::size_t count_ = 0;
  bool centered_;
};

/// sigmaY2_hat is the uncentered (1/n) sum Y_i^2 unless `centered_sigma`,
/// which switches to the centered sample variance.
SampleMoments moments(const Sample &sample, bool centered_sigma = false);

/// [beta^_m]_j = [g^]_j / lambda^_j if lambda^_j >= 1/n, else 0; length m.
CoefVector estimate_beta(const SampleMoments &mom, std::size_t m);

/// Phi^_g: coefficients [g^]_j / lambda^_j 1{lambda^_j >= 1/n} for all j <= J.
CoefVector inverse_image(const SampleMoments &mom);

/// Upsilon(beta^_m) = -sum_{j<=m} omega_j [g^]_j^2 / lambda^_j^2 1{...}.
double contrast(const SampleMoments &mom, const WeightVector &w, std::size_t m);
/// contrast for m = 1..m_max in one pass.
std::vector<double> contrast_path(const SampleMoments &mom,
                                  const WeightVector &w, std::size_t m_max);

/// pen(m) = C sigma_Y^2 eta delta_m / n with C = 192 by default.
double penalty_known(const PenaltyScales &scales, double sigmaY2, double eta,
                     std::size_t n, std::size_t m,
                     double pen_const = kPenaltyConstKnown);

struct EstimatedScales {
  double Delta = 0.0;
  double kappa = 0.0;
  double delta = 0.0;
};

/// Plug-in Delta^_m, kappa^_m, delta^_m.  A thresholded coordinate contributes
/// 0 to the maxima; if every coordinate up to m is thresholded all three are 0.
EstimatedScales estimated_scales(const SampleMoments &mom,
                                 const WeightVector &w, std::size_t m);
std::vector<EstimatedScales> estimated_scales_path(const SampleMoments &mom,
                                                   const WeightVector &w,
                                                   std::size_t m_max);

/// p^en(m) = C sigma^_Y^2 eta delta^_m / n with C = 1920 by default.
double penalty_hat(const SampleMoments &mom, const WeightVector &w, double eta,
                   std::size_t m, double pen_const = kPenaltyConstUnknown);

/// Largest N <= min(n, w.size()) with max_{j<=N} w_j <= n.
std::size_t bound_N_from_weights(const WeightVector &w, std::size_t n);

/// Largest M <= N_n with lambda^_M / (M max(omega_M, 1)) >= log(n)/n; 1 if no
/// index qualifies.
std::size_t bound_M_hat(const SampleMoments &mom, const WeightVector &w);

enum class Variant { KnownDegree, DataDriven };
std::string_view to_string(Variant v) noexcept;

/// Per-m diagnostics of a selection run.  The lists cover m = 1..evaluated()
/// where evaluated() may exceed admissible_max for auditing; m_hat is chosen
/// among 1..admissible_max only.
struct SelectionTrace {
  Variant variant = Variant::DataDriven;
  std::size_t admissible_max = 1;
  std::vector<double> contrast;
  std::vector<double> penalty;
  std::vector<double> delta_used;
  std::size_t m_hat = 1;
  double eta = kDefaultEta;
  double pen_const = 0.0;

  std::size_t evaluated() const noexcept { return contrast.size(); }
  double criterion(std::size_t m) const {
    return contrast[m - 1] + penalty[m - 1];
  }
};

/// argmin over m in 1..M_n of contrast + pen; smallest m on ties.
SelectionTrace select_known(const SampleMoments &mom, const WeightVector &w,
                            const PenaltyScales &scales, std::size_t M_n,
                            double eta = kDefaultEta,
                            double pen_const = kPenaltyConstKnown);

/// argmin over m in 1..M^_n of contrast + p^en.  Needs only omega and the
/// sample: neither gamma nor lambda enters.
SelectionTrace select_data_driven(const SampleMoments &mom,
                                  const WeightVector &w,
                                  double eta = kDefaultEta,
                                  double pen_const = kPenaltyConstUnknown);

/// Columns: m, contrast, penalty, delta_used, admissible, chosen.
void write_trace_csv(std::ostream &out, const SelectionTrace &trace,
                     const std::string &comment);

} // namespace fls

#endif
