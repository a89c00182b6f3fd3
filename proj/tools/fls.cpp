// Experiment harness for the adaptive orthogonal-series estimator.
//
//   fls rates    --config run.cfg --out DIR
//   fls simulate --config run.cfg --out DIR
//   fls estimate --config run.cfg --out DIR
//   fls mc-risk  --config run.cfg --out DIR --workers 4
//
// Exit codes: 0 success, 2 configuration or output-directory error,
// 3 numeric failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fls/config.hpp"
#include "fls/csv.hpp"
#include "fls/datagen.hpp"
#include "fls/errors.hpp"
#include "fls/estimator.hpp"
#include "fls/risk.hpp"
#include "fls/sequences.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_dir;
  unsigned workers = 1;
  std::vector<std::string> overrides;
};

fls::RunConfig load(const Options &opt) {
  std::ifstream in(opt.config_path);
  if (!in)
    throw fls::ConfigError("cannot read config file '" + opt.config_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  fls::RunConfig cfg = fls::parse_config(buf.str(), opt.overrides);
  if (!opt.out_dir.empty())
    cfg.out_dir = opt.out_dir;
  return cfg;
}

fs::path prepare_out_dir(const fls::RunConfig &cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw OutputError("out_dir '" + cfg.out_dir + "' cannot be created");
  const fs::path probe = dir / ".fls_write_probe";
  {
    std::ofstream f(probe);
    if (!f)
      throw OutputError("out_dir '" + cfg.out_dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

std::ofstream open_output(const fs::path &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw OutputError("cannot write '" + path.string() + "'");
  return f;
}

std::string header(const fls::RunConfig &cfg) {
  return std::string(fls::kVersion) + " | " + fls::config_echo(cfg);
}

std::string tag(std::size_t n, std::size_t r) {
  return "n" + std::to_string(n) + "_r" + std::to_string(r);
}

std::vector<fls::Variant> variants_of(fls::VariantChoice c) {
  switch (c) {
  case fls::VariantChoice::Known:
    return {fls::Variant::KnownDegree};
  case fls::VariantChoice::DataDriven:
    return {fls::Variant::DataDriven};
  case fls::VariantChoice::Both:
    break;
  }
  return {fls::Variant::KnownDegree, fls::Variant::DataDriven};
}

int cmd_rates(const fls::RunConfig &cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  const fls::SequenceSpec spec = cfg.sequence_spec();
  auto rates = open_output(dir / "rates.csv");
  rates << "# " << header(cfg) << '\n'
        << "n,M_n,N_n,m_star,m_dagger,theoretical_rate,min_lambda_ok\n";
  std::size_t m_show = 1;
  for (std::size_t n : cfg.n_grid) {
    const fls::PenaltyScales scales = fls::intrinsic_scales(spec, n);
    const std::size_t M = fls::bound_M(spec, scales, n);
    const std::size_t m_star = fls::balance_m_star(spec, n);
    const std::size_t m_dag = fls::balance_m_dagger(spec, scales, n);
    bool lambda_ok = true;
    for (std::size_t j = 1; j <= M; ++j)
      lambda_ok = lambda_ok && fls::lambda(spec, j) >= 2.0 / static_cast<double>(n);
    rates << n << ',' << M << ',' << fls::bound_N(spec, n) << ',' << m_star
          << ',' << m_dag << ','
          << fls::format_double(fls::theoretical_rate(spec, static_cast<double>(n)))
          << ',' << (lambda_ok ? 1 : 0) << '\n';
    m_show = std::max({m_show, M, m_star, m_dag});
  }
  const fls::PenaltyScales scales = fls::intrinsic_scales(spec, m_show);
  auto table = open_output(dir / "scales.csv");
  table << "# " << header(cfg) << '\n' << "m,delta,Delta,kappa\n";
  for (std::size_t m = 1; m <= m_show; ++m)
    table << m << ',' << fls::format_double(scales.delta[m - 1]) << ','
          << fls::format_double(scales.Delta[m - 1]) << ','
          << fls::format_double(scales.kappa[m - 1]) << '\n';
  return kExitOk;
}

int cmd_simulate(const fls::RunConfig &cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  const fls::SequenceSpec spec = cfg.sequence_spec();
  for (std::size_t n : cfg.n_grid) {
    const fls::GridPoint g = fls::plan_grid_point(cfg, n);
    const fls::Slope slope = fls::make_slope({spec, cfg.rho, g.J, 1.0});
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      const fls::Sample sample = fls::simulate(
          spec, slope.coefs, n, g.J, cfg.sigma, fls::grid_seed(cfg.seed, n), r);
      auto out = open_output(dir / ("sample_" + tag(n, r) + ".csv"));
      fls::write_sample_csv(out, sample,
                            header(cfg) + " | J=" + std::to_string(g.J) +
                                "; sigma=" + fls::format_double(cfg.sigma) +
                                "; replicate=" + std::to_string(r));
    }
  }
  return kExitOk;
}

int cmd_estimate(const fls::RunConfig &cfg) {
  const fs::path dir = prepare_out_dir(cfg);
  const fls::SequenceSpec spec = cfg.sequence_spec();
  const auto variants = variants_of(cfg.variant);
  for (std::size_t n : cfg.n_grid) {
    const fls::GridPoint g = fls::plan_grid_point(cfg, n);
    const fls::Slope slope = fls::make_slope({spec, cfg.rho, g.J, 1.0});
    const fls::WeightVector w = fls::omega_weights(spec, g.J);
    const fls::PenaltyScales scales =
        fls::intrinsic_scales(spec, std::max(n, g.J));
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      fls::MomentAccumulator acc(g.J);
      fls::simulate_units(spec, slope.coefs, n, g.J, cfg.sigma,
                          fls::grid_seed(cfg.seed, n), r,
                          [&](std::size_t, double y, std::span<const double> x) {
                            acc.add(y, x);
                          });
      const fls::SampleMoments mom = acc.finish();
      for (fls::Variant v : variants) {
        if (v == fls::Variant::KnownDegree && g.J < g.M_n)
          throw fls::ConfigError("j_max: must be >= M_n = " +
                                 std::to_string(g.M_n));
        const fls::SelectionTrace trace =
            v == fls::Variant::KnownDegree
                ? fls::select_known(mom, w, scales, g.M_n, cfg.eta,
                                    cfg.pen_const_known)
                : fls::select_data_driven(mom, w, cfg.eta,
                                          cfg.pen_const_unknown);
        const std::string name =
            std::string(fls::to_string(v)) + "_" + tag(n, r) + ".csv";
        auto tf = open_output(dir / ("trace_" + name));
        fls::write_trace_csv(tf, trace, header(cfg));
        const fls::CoefVector beta_hat = fls::estimate_beta(mom, trace.m_hat);
        auto bf = open_output(dir / ("beta_hat_" + name));
        bf << "# " << header(cfg) << '\n' << "j,beta_hat\n";
        for (std::size_t j = 1; j <= beta_hat.size(); ++j)
          bf << j << ',' << fls::format_double(beta_hat.coef(j)) << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_mc_risk(const fls::RunConfig &cfg, unsigned workers) {
  const fs::path dir = prepare_out_dir(cfg);
  const fls::RiskReport report = fls::run_experiment(cfg, workers);
  auto out = open_output(dir / "risk_report.csv");
  fls::write_report_csv(out, report);
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Adaptive orthogonal-series estimation harness for circular "
               "functional linear regression"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", opt.config_path, "Configuration file")
        ->required();
    sub->add_option("--out", opt.out_dir, "Output directory (overrides out_dir)");
    sub->add_option("--workers", opt.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--override", opt.overrides,
                    "KEY=VALUE applied after parsing the config file");
  };
  auto *rates = app.add_subcommand("rates", "Deterministic sequence tables");
  auto *simulate = app.add_subcommand("simulate", "Write simulated samples");
  auto *estimate = app.add_subcommand("estimate", "Selection traces and estimates");
  auto *mc_risk = app.add_subcommand("mc-risk", "Monte Carlo risk report");
  for (auto *sub : {rates, simulate, estimate, mc_risk})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const fls::RunConfig cfg = load(opt);
    if (*rates)
      return cmd_rates(cfg);
    if (*simulate)
      return cmd_simulate(cfg);
    if (*estimate)
      return cmd_estimate(cfg);
    return cmd_mc_risk(cfg, opt.workers);
  } catch (const fls::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const OutputError &e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}
