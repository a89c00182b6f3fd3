#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "fls/config.hpp"
#include "fls/datagen.hpp"
#include "fls/errors.hpp"
#include "fls/risk.hpp"
#include "oracle.hpp"

using fls::CoefVector;
using fls::Regime;
using fls::SequenceSpec;
using fls::WeightVector;
using doctest::Approx;

namespace {

fls::RunConfig small_config() {
  fls::RunConfig c;
  c.regime = Regime::PP;
  c.a = 1;
  c.p = 2;
  c.s = 0;
  c.sigma = 0.5;
  c.rho = 1;
  c.n_grid = {100, 200, 400};
  c.replications = 6;
  c.seed = 20260101;
  c.variant = fls::VariantChoice::Both;
  c.pen_const_known = 0.4;
  c.pen_const_unknown = 0.4;
  return c;
}

std::string report_csv(const fls::RiskReport &r) {
  std::ostringstream out;
  fls::write_report_csv(out, r);
  return out.str();
}

} // namespace

TEST_CASE("risk examples") {
  const CoefVector b({1.0, 1.0});
  CHECK(fls::risk(b, b, WeightVector({1, 4})) == 0.0);
  CHECK(fls::risk(CoefVector::zeros(2), b, WeightVector({1, 4})) == 5.0);
  CHECK(fls::risk(CoefVector({2.0}), b, WeightVector::ones(2)) == 2.0);
  CHECK(fls::risk(CoefVector({2.0}), b, WeightVector::ones(2), 0.5) == 2.5);
  CHECK_THROWS(fls::risk(CoefVector::zeros(3), b, WeightVector::ones(2)));
}

TEST_CASE("fit_slope examples") {
  std::vector<std::pair<double, double>> inv, flat, pp;
  for (double n : {250.0, 500.0, 1000.0, 2000.0, 4000.0}) {
    inv.emplace_back(n, 3.0 / n);
    flat.emplace_back(n, 0.7);
    pp.emplace_back(n, std::pow(n, -4.0 / 7.0));
  }
  CHECK(fls::fit_slope(inv) == Approx(-1.0).epsilon(1e-12));
  CHECK(std::fabs(fls::fit_slope(flat)) < 1e-12);
  CHECK(std::fabs(fls::fit_slope(pp) + 4.0 / 7.0) < 1e-12);
  std::vector<std::pair<double, double>> zero{{100, 0.0}, {200, 1.0}};
  CHECK_THROWS_AS(fls::fit_slope(zero), std::domain_error);
  std::vector<std::pair<double, double>> one{{100, 1.0}};
  CHECK_THROWS(fls::fit_slope(one));
}

TEST_CASE("fixed-m risk path equals the direct risk of each truncated estimate") {
  const SequenceSpec pp(Regime::PP, 1, 2, 0.5);
  const auto sl = fls::make_slope({pp, 1.0, 20, 1.0});
  const auto w = fls::omega_weights(pp, 30);
  const auto mom = fls::moments(fls::simulate(pp, sl.coefs, 300, 30, 0.5, 3));
  const auto path = fls::fixed_m_risk_path(mom, sl.coefs, w, 30, 0.01);
  for (std::size_t m = 1; m <= 30; ++m)
    CHECK(path[m - 1] ==
          Approx(fls::risk(fls::estimate_beta(mom, m), sl.coefs, w, 0.01)).epsilon(1e-12));
  CHECK_THROWS_AS(fls::fixed_m_risk_path(mom, sl.coefs, w, 31), std::domain_error);
}

TEST_CASE("oracle: noiseless exact moments give the largest unthresholded m") {
  // Exact population moments: ghat = lambda * beta, lhat = lambda.
  const SequenceSpec pp(Regime::PP, 1, 2, 0);
  const auto sl = fls::make_slope({pp, 1.0, 12, 1.0});
  fls::SampleMoments mom;
  mom.n = 100;
  for (std::size_t j = 1; j <= 12; ++j) {
    mom.lhat.push_back(fls::lambda(pp, j));
    mom.ghat.push_back(fls::lambda(pp, j) * sl.coefs.coef(j));
  }
  // lambda_j >= 1/100 holds for j <= 11 (pairing: lambda_11 = lambda_10).
  const auto w = fls::omega_weights(pp, 12);
  const std::vector<fls::SampleMoments> one{mom};
  const auto o = fls::oracle_risk(one, sl.coefs, w, 12);
  CHECK(o.best_m == 11);
  const double bias = sl.coefs.coef(12) * sl.coefs.coef(12);
  CHECK(o.risk == Approx(bias).epsilon(1e-10));
}

TEST_CASE("oracle: beta = 0 prefers the smallest model") {
  const SequenceSpec pp(Regime::PP, 1, 2, 0);
  const auto w = fls::omega_weights(pp, 20);
  std::vector<fls::SampleMoments> samples;
  for (std::uint64_t r = 0; r < 30; ++r)
    samples.push_back(fls::moments(fls::simulate(pp, CoefVector::zeros(1), 500, 20, 1.0, 11, r)));
  const auto o = fls::oracle_risk(samples, CoefVector::zeros(1), w, 20);
  CHECK(o.best_m == 1);
  std::vector<double> mhat;
  for (const auto &m : samples)
    mhat.push_back(static_cast<double>(fls::select_data_driven(m, w, 3.0, 0.4).m_hat));
  std::sort(mhat.begin(), mhat.end());
  CHECK(static_cast<double>(o.best_m) <= mhat[mhat.size() / 2] + 1.0);
}

TEST_CASE("oracle golden: PP(a=1, p=2, s=0), n = 1000, R = 100") {
  // Frozen from the loop oracle (plain per-m risk sums) on the same samples.
  const SequenceSpec pp(Regime::PP, 1, 2, 0);
  const std::size_t n = 1000, J = 50;
  const auto sl = fls::make_slope({pp, 1.0, J, 1.0});
  std::vector<fls::SampleMoments> samples;
  for (std::uint64_t r = 0; r < 100; ++r)
    samples.push_back(fls::moments(
        fls::simulate(pp, sl.coefs, n, J, 0.5, fls::grid_seed(20260101, n), r)));
  const auto o = fls::oracle_risk(samples, sl.coefs, fls::omega_weights(pp, J), J);
  CHECK(o.best_m == 2);
  CHECK(o.risk == Approx(0.0058995867718794753).epsilon(1e-12));
}

TEST_CASE("grid planning") {
  auto c = small_config();
  const auto g = fls::plan_grid_point(c, 100);
  CHECK(g.M_n == 4);
  CHECK(g.N_n == 100);
  CHECK(g.J == 100);
  c.j_max = 7;
  CHECK(fls::plan_grid_point(c, 100).J == 7);
  CHECK(fls::grid_seed(1, 100) != fls::grid_seed(1, 200));
  CHECK(fls::grid_seed(1, 100) != fls::grid_seed(2, 100));
}

TEST_CASE("run_experiment: report structure") {
  const auto rep = fls::run_experiment(small_config(), 1);
  CHECK(rep.rows.size() == 6);
  CHECK(rep.variants.size() == 2);
  for (const auto &row : rep.rows) {
    CHECK(row.mean_risk > 0.0);
    CHECK(row.median_m_hat >= 1.0);
    CHECK(row.oracle_m >= 1);
    CHECK(row.theoretical_rate ==
          Approx(std::pow(static_cast<double>(row.n), -4.0 / 7.0)));
  }
  CHECK(std::isfinite(rep.slope(fls::Variant::KnownDegree)));
  CHECK(rep.rows_for(fls::Variant::DataDriven).size() == 3);
  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("# fls-harness 1.0.0 | ", 0) == 0);
  CHECK(csv.find("\nn,variant,mean_risk,median_risk,median_m_hat,median_M_hat,"
                 "oracle_m,oracle_risk,theoretical_rate,fitted_slope\n") != std::string::npos);
}

TEST_CASE("run_experiment: determinism across runs and worker counts") {
  const auto c = small_config();
  const std::string one = report_csv(fls::run_experiment(c, 1));
  CHECK(report_csv(fls::run_experiment(c, 1)) == one);
  CHECK(report_csv(fls::run_experiment(c, 3)) == one);
  CHECK(report_csv(fls::run_experiment(c, 8)) == one);
  auto other = c;
  other.seed = 7;
  CHECK(report_csv(fls::run_experiment(other, 2)) != one);
}

TEST_CASE("run_experiment: degenerate grid gives the bias-only loss") {
  auto c = small_config();
  c.n_grid = {50};
  c.replications = 1;
  c.sigma = 0.0;
  c.j_max = 1;
  c.variant = fls::VariantChoice::DataDriven;
  const auto rep = fls::run_experiment(c, 1);
  REQUIRE(rep.rows.size() == 1);
  const auto sl = fls::make_slope({c.sequence_spec(), c.rho, 1, 1.0});
  // Y = beta_1 X_1 exactly, so beta-hat_1 = beta_1 and only the tail remains.
  CHECK(rep.rows[0].mean_risk == Approx(sl.omega_tail()).epsilon(1e-10));
  CHECK(std::isnan(rep.slope(fls::Variant::DataDriven)));
}

TEST_CASE("run_experiment: configuration errors") {
  auto c = small_config();
  c.j_max = 2; // below M_n = 4 with the known variant
  CHECK_THROWS_AS(fls::run_experiment(c, 1), fls::ConfigError);
  c.variant = fls::VariantChoice::DataDriven;
  CHECK_NOTHROW(fls::run_experiment(c, 1));
  auto bad = small_config();
  bad.a = 0.4;
  CHECK_THROWS_AS(fls::run_experiment(bad, 1), fls::ConfigError);
}
