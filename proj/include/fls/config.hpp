#ifndef FLS_CONFIG_HPP
#define FLS_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fls/sequences.hpp"

namespace fls {

enum class VariantChoice { Known, DataDriven, Both };

/// Everything an experiment needs.  Documents use one flat `key = value` per
/// line with '#' comments; n_grid is a comma-separated list.
///
/// Required keys: regime, a, p, s, sigma, rho, n_grid, replications, seed.
/// Optional keys and defaults: eta = 3, variant = data_driven,
/// pen_const_known = 192, pen_const_unknown = 1920, enforce_pair = true,
/// j_max (unset: per-n default), out_dir = out.
struct RunConfig {
  Regime regime = Regime::PP;
  double a = 1.0;
  double p = 2.0;
  double s = 0.0;
  double sigma = 0.5;
  double rho = 1.0;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  double eta = 3.0;
  VariantChoice variant = VariantChoice::DataDriven;
  double pen_const_known = 192.0;
  double pen_const_unknown = 1920.0;
  bool enforce_pair = true;
  std::optional<std::size_t> j_max;
  std::string out_dir = "out";

  SequenceSpec sequence_spec() const;
  bool operator==(const RunConfig &) const = default;
};

/// Parses and validates a configuration document.  `overrides` are KEY=VALUE
/// strings applied after the document and before validation.  Throws
/// ConfigError naming the offending key or violated constraint.
RunConfig parse_config(std::string_view text,
                       const std::vector<std::string> &overrides = {});

/// Throws ConfigError if any constraint is violated.
void validate(const RunConfig &config);

/// Document form accepted by parse_config (round-trips exactly).
std::string serialize_config(const RunConfig &config);

/// Single-line echo of every field except out_dir, for CSV headers.
std::string config_echo(const RunConfig &config);

std::string_view to_string(VariantChoice v) noexcept;

} // namespace fls

#endif
