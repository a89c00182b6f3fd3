#include "fls/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "fls/csv.hpp"
#include "fls/datagen.hpp"
#include "fls/errors.hpp"
#include "fls/rng.hpp"
#include "fls/sequences.hpp"

namespace fls {

namespace {

double median(std::vector<double> v) {
  if (v.empty())
    throw std::invalid_argument("median of empty list");
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lower + upper);
}

struct VariantOutcome {
  double risk = 0.0;
  std::size_t m_hat = 0;
  std::size_t admissible_max = 0;
};

struct ReplicateOutcome {
  std::vector<VariantOutcome> per_variant;
  std::vector<double> fixed_path;
};

std::vector<Variant> variants_of(VariantChoice c) {
  switch (c) {
  case VariantChoice::Known:
    return {Variant::KnownDegree};
  case VariantChoice::DataDriven:
    return {Variant::DataDriven};
  case VariantChoice::Both:
    return {Variant::KnownDegree, Variant::DataDriven};
  }
  return {};
}

// Inputs shared read-only by all replicates of one grid point.
struct GridContext {
  GridPoint point;
  SequenceSpec spec;
  Slope slope;
  double tail = 0.0;
  WeightVector w;
  PenaltyScales scales;
  std::uint64_t seed = 0;
};

} // namespace

double risk(const CoefVector &beta_hat, const CoefVector &beta,
            const WeightVector &w, double tail) {
  const std::size_t J = std::max(beta_hat.size(), beta.size());
  if (w.size() < J)
    throw std::invalid_argument("risk: weights shorter than the coefficients");
  double sum = 0.0;
  for (std::size_t i = 0; i < J; ++i) {
    const double a = i < beta_hat.size() ? beta_hat[i] : 0.0;
    const double b = i < beta.size() ? beta[i] : 0.0;
    sum += w[i] * (a - b) * (a - b);
  }
  return sum + tail;
}

std::vector<double> fixed_m_risk_path(const SampleMoments &mom,
                                      const CoefVector &beta,
                                      const WeightVector &w, std::size_t m_max,
                                      double tail) {
  if (m_max == 0 || m_max > mom.J())
    throw std::domain_error("fixed_m_risk_path: m_max outside 1..J");
  const std::size_t K = std::max(m_max, beta.size());
  if (w.size() < K)
    throw std::invalid_argument("fixed_m_risk_path: weights too short");
  // Bias of dropping coordinates m+1..K.
  std::vector<double> bias(K + 1, 0.0);
  for (std::size_t j = K; j >= 1; --j) {
    const double b = j <= beta.size() ? beta[j - 1] : 0.0;
    bias[j - 1] = bias[j] + w[j - 1] * b * b;
  }
  std::vector<double> out(m_max);
  double err = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double est =
        mom.passes_threshold(m) ? mom.ghat[m - 1] / mom.lhat[m - 1] : 0.0;
    const double b = m <= beta.size() ? beta[m - 1] : 0.0;
    err += w[m - 1] * (est - b) * (est - b);
    out[m - 1] = err + bias[m] + tail;
  }
  return out;
}

OracleResult oracle_risk(std::span<const SampleMoments> samples,
                         const CoefVector &beta, const WeightVector &w,
                         std::size_t m_max, double tail) {
  if (samples.empty())
    throw std::invalid_argument("oracle_risk: needs at least one sample");
  std::vector<double> total(m_max, 0.0);
  for (const auto &mom : samples) {
    const auto path = fixed_m_risk_path(mom, beta, w, m_max, tail);
    for (std::size_t m = 0; m < m_max; ++m)
      total[m] += path[m];
  }
  OracleResult best{1, total[0]};
  for (std::size_t m = 2; m <= m_max; ++m)
    if (total[m - 1] < best.risk)
      best = {m, total[m - 1]};
  best.risk /= static_cast<double>(samples.size());
  return best;
}

double fit_slope(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2)
    throw std::invalid_argument("fit_slope: needs at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto &[n, r] : pairs) {
    if (!(n > 0.0))
      throw std::domain_error("fit_slope: sample sizes must be positive");
    if (!(r > 0.0))
      throw std::domain_error("fit_slope: risks must be positive");
    mx += std::log(n);
    my += std::log(r);
  }
  const double k = static_cast<double>(pairs.size());
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto &[n, r] : pairs) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(r) - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_slope: needs two distinct sample sizes");
  return sxy / sxx;
}

std::uint64_t grid_seed(std::uint64_t seed, std::size_t n) {
  return substream_seed(seed, n, 0xC0FFEEULL);
}

GridPoint plan_grid_point(const RunConfig &config, std::size_t n) {
  const SequenceSpec spec = config.sequence_spec();
  const PenaltyScales scales = intrinsic_scales(spec, n);
  GridPoint g;
  g.n = n;
  g.M_n = bound_M(spec, scales, n);
  g.N_n = bound_N(spec, n);
  g.m_dagger = balance_m_dagger(spec, scales, n);
  g.J = config.j_max ? *config.j_max
                     : std::max({g.N_n, 2 * g.m_dagger, g.M_n});
  return g;
}

double RiskReport::slope(Variant v) const {
  for (std::size_t i = 0; i < variants.size(); ++i)
    if (variants[i] == v)
      return slopes[i];
  throw std::invalid_argument("RiskReport: variant not in report");
}

std::vector<RiskRow> RiskReport::rows_for(Variant v) const {
  std::vector<RiskRow> out;
  for (const auto &r : rows)
    if (r.variant == v)
      out.push_back(r);
  return out;
}

RiskReport run_experiment(const RunConfig &config, unsigned workers) {
  validate(config);
  const SequenceSpec spec = config.sequence_spec();
  const auto variants = variants_of(config.variant);
  const bool wants_known =
      std::find(variants.begin(), variants.end(), Variant::KnownDegree) !=
      variants.end();
  const std::size_t R = config.replications;

  std::vector<GridContext> grid;
  for (std::size_t n : config.n_grid) {
    const GridPoint g = plan_grid_point(config, n);
    if (wants_known && g.J < g.M_n)
      throw ConfigError("j_max: must be >= M_n = " + std::to_string(g.M_n) +
                        " at n = " + std::to_string(n) +
                        " for the known-degree variant");
    Slope slope = make_slope({spec, config.rho, g.J, 1.0});
    const double tail = slope.omega_tail();
    grid.push_back({g, spec, std::move(slope), tail, omega_weights(spec, g.J),
                    intrinsic_scales(spec, std::max(n, g.J)),
                    grid_seed(config.seed, n)});
  }

  const std::size_t tasks = grid.size() * R;
  std::vector<ReplicateOutcome> outcomes(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks)
        return;
      try {
        const GridContext &g = grid[t / R];
        const std::size_t r = t % R;
        MomentAccumulator acc(g.point.J);
        simulate_units(g.spec, g.slope.coefs, g.point.n, g.point.J,
                       config.sigma, g.seed, r,
                       [&](std::size_t, double y, std::span<const double> x) {
                         acc.add(y, x);
                       });
        const SampleMoments mom = acc.finish();
        ReplicateOutcome &out = outcomes[t];
        for (Variant v : variants) {
          const SelectionTrace trace =
              v == Variant::KnownDegree
                  ? select_known(mom, g.w, g.scales, g.point.M_n, config.eta,
                                 config.pen_const_known)
                  : select_data_driven(mom, g.w, config.eta,
                                       config.pen_const_unknown);
          const CoefVector beta_hat = estimate_beta(mom, trace.m_hat);
          out.per_variant.push_back(
              {risk(beta_hat, g.slope.coefs, g.w, g.tail), trace.m_hat,
               trace.admissible_max});
        }
        out.fixed_path =
            fixed_m_risk_path(mom, g.slope.coefs, g.w, g.point.J, g.tail);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };

  const unsigned threads = std::max(1u, workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i)
      pool.emplace_back(work);
  }
  if (failure)
    std::rethrow_exception(failure);

  // Reduction in (n, r) order, independent of which worker ran what.
  RiskReport report;
  report.config = config;
  report.variants = variants;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const GridContext &g = grid[gi];
    std::vector<double> fixed_total(g.point.J, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
      const auto &path = outcomes[gi * R + r].fixed_path;
      for (std::size_t m = 0; m < path.size(); ++m)
        fixed_total[m] += path[m];
    }
    std::size_t oracle_m = 1;
    for (std::size_t m = 2; m <= fixed_total.size(); ++m)
      if (fixed_total[m - 1] < fixed_total[oracle_m - 1])
        oracle_m = m;
    const double oracle = fixed_total[oracle_m - 1] / static_cast<double>(R);

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      std::vector<double> risks(R), m_hats(R), bounds(R);
      double total = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        const auto &o = outcomes[gi * R + r].per_variant[vi];
        risks[r] = o.risk;
        m_hats[r] = static_cast<double>(o.m_hat);
        bounds[r] = static_cast<double>(o.admissible_max);
        total += o.risk;
      }
      RiskRow row;
      row.n = g.point.n;
      row.variant = variants[vi];
      row.mean_risk = total / static_cast<double>(R);
      row.median_risk = median(risks);
      row.median_m_hat = median(m_hats);
      row.median_M_hat = median(bounds);
      row.oracle_m = oracle_m;
      row.oracle_risk = oracle;
      row.theoretical_rate = theoretical_rate(spec, static_cast<double>(g.point.n));
      report.rows.push_back(row);
    }
  }

  for (Variant v : variants) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto &row : report.rows_for(v))
      pairs.emplace_back(static_cast<double>(row.n),
                         std::max(row.median_risk,
                                  std::numeric_limits<double>::min()));
    report.slopes.push_back(pairs.size() >= 2
                                ? fit_slope(pairs)
                                : std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

void write_report_csv(std::ostream &out, const RiskReport &report) {
  out << "# " << kVersion << " | " << config_echo(report.config) << '\n';
  out << "n,variant,mean_risk,median_risk,median_m_hat,median_M_hat,oracle_m,"
         "oracle_risk,theoretical_rate,fitted_slope\n";
  for (const auto &row : report.rows) {
    out << row.n << ',' << to_string(row.variant) << ','
        << format_double(row.mean_risk) << ','
        << format_double(row.median_risk) << ','
        << format_double(row.median_m_hat) << ','
        << format_double(row.median_M_hat) << ',' << row.oracle_m << ','
        << format_double(row.oracle_risk) << ','
        << format_double(row.theoretical_rate) << ','
        << format_double(report.slope(row.variant)) << '\n';
  }
}

} // namespace fls
