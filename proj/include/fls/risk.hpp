#ifndef FLS_RISK_HPP
#define FLS_RISK_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fls/config.hpp"
#include "fls/estimator.hpp"
#include "fls/trig.hpp"

namespace fls {

/// ||beta_hat - beta||_w^2 over the zero-padded union of both supports, plus
/// `tail` (the weighted mass of beta beyond its stored coefficients).
double risk(const CoefVector &beta_hat, const CoefVector &beta,
            const WeightVector &w, double tail = 0.0);

/// Loss of the fixed-dimension estimator beta^_m for m = 1..m_max.
std::vector<double> fixed_m_risk_path(const SampleMoments &mom,
                                      const CoefVector &beta,
                                      const WeightVector &w, std::size_t m_max,
                                      double tail = 0.0);

struct OracleResult {
  std::size_t best_m = 1;
  double risk = 0.0;
};

/// Best fixed dimension in 1..m_max by mean loss over the samples.
OracleResult oracle_risk(std::span<const SampleMoments> samples,
                         const CoefVector &beta, const WeightVector &w,
                         std::size_t m_max, double tail = 0.0);

/// OLS slope of log(risk) on log(n).  Needs two distinct n and positive risks.
double fit_slope(std::span<const std::pair<double, double>> pairs);

/// Seed of the simulation stream used for sample size n; replicate r of that
/// grid point is replicate r of this stream.
std::uint64_t grid_seed(std::uint64_t seed, std::size_t n);

/// Per-n deterministic quantities fixed by the configuration.
struct GridPoint {
  std::size_t n = 0;
  std::size_t J = 0;
  std::size_t M_n = 0;
  std::size_t N_n = 0;
  std::size_t m_dagger = 0;
};

/// Truncation J = max(N_n, 2 m_dagger, M_n) unless j_max is configured.
GridPoint plan_grid_point(const RunConfig &config, std::size_t n);

struct RiskRow {
  std::size_t n = 0;
  Variant variant = Variant::DataDriven;
  double mean_risk = 0.0;
  double median_risk = 0.0;
  double median_m_hat = 0.0;
  double median_M_hat = 0.0;
  std::size_t oracle_m = 0;
  double oracle_risk = 0.0;
  double theoretical_rate = 0.0;
};

struct RiskReport {
  RunConfig config;
  std::vector<RiskRow> rows;
  /// Fitted log-log slope of median risk, one per variant in `variants`.
  std::vector<Variant> variants;
  std::vector<double> slopes;

  double slope(Variant v) const;
  std::vector<RiskRow> rows_for(Variant v) const;
};

/// Simulates, selects and scores every (n, replicate) pair.  The report is a
/// pure function of `config`: any worker count gives identical output.
RiskReport run_experiment(const RunConfig &config, unsigned workers = 1);

/// Columns: n, variant, mean_risk, median_risk, median_m_hat, median_M_hat,
/// oracle_m, oracle_risk, theoretical_rate, fitted_slope.
void write_report_csv(std::ostream &out, const RiskReport &report);

} // namespace fls

#endif
