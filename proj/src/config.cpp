#include "fls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fls/csv.hpp"
#include "fls/errors.hpp"

namespace fls {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "regime",          "a",
    "p",               "s",
    "sigma",           "rho",
    "n_grid",          "replications",
    "seed",            "eta",
    "variant",         "pen_const_known",
    "pen_const_unknown", "enforce_pair",
    "j_max",           "out_dir"};

const char *const kRequiredKeys[] = {"regime", "a",     "p",
                                     "s",      "sigma", "rho",
                                     "n_grid", "replications", "seed"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": expected a finite real, got '" +
                      std::string(v) + "'");
  return out;
}

template <class Int> Int parse_integer(std::string_view key, std::string_view v) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true")
    return true;
  if (v == "false")
    return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" +
                    std::string(v) + "'");
}

VariantChoice parse_variant(std::string_view v) {
  if (v == "known")
    return VariantChoice::Known;
  if (v == "data_driven")
    return VariantChoice::DataDriven;
  if (v == "both")
    return VariantChoice::Both;
  throw ConfigError("variant: expected known, data_driven or both, got '" +
                    std::string(v) + "'");
}

std::vector<std::size_t> parse_grid(std::string_view v) {
  std::vector<std::size_t> grid;
  while (true) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (item.empty())
      throw ConfigError("n_grid: empty entry");
    grid.push_back(parse_integer<std::size_t>("n_grid", item));
    if (comma == std::string_view::npos)
      break;
    v.remove_prefix(comma + 1);
  }
  return grid;
}

void assign(std::map<std::string, std::string, std::less<>> &kv,
            std::string_view line, bool allow_replace, std::string_view origin) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError(std::string(origin) + ": expected key = value, got '" +
                      std::string(line) + "'");
  const std::string key(trim(line.substr(0, eq)));
  const std::string value(trim(line.substr(eq + 1)));
  if (!kKnownKeys.contains(key))
    throw ConfigError("unknown key '" + key + "'");
  if (!allow_replace && kv.contains(key))
    throw ConfigError("duplicate key '" + key + "'");
  kv[key] = value;
}

std::string join_grid(const std::vector<std::size_t> &grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i)
      out += ',';
    out += std::to_string(grid[i]);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>>
fields(const RunConfig &c) {
  std::vector<std::pair<std::string, std::string>> f = {
      {"regime", std::string(to_string(c.regime))},
      {"a", format_double(c.a)},
      {"p", format_double(c.p)},
      {"s", format_double(c.s)},
      {"sigma", format_double(c.sigma)},
      {"rho", format_double(c.rho)},
      {"n_grid", join_grid(c.n_grid)},
      {"replications", std::to_string(c.replications)},
      {"seed", std::to_string(c.seed)},
      {"eta", format_double(c.eta)},
      {"variant", std::string(to_string(c.variant))},
      {"pen_const_known", format_double(c.pen_const_known)},
      {"pen_const_unknown", format_double(c.pen_const_unknown)},
      {"enforce_pair", c.enforce_pair ? "true" : "false"},
  };
  if (c.j_max)
    f.emplace_back("j_max", std::to_string(*c.j_max));
  return f;
}

} // namespace

std::string_view to_string(VariantChoice v) noexcept {
  switch (v) {
  case VariantChoice::Known:
    return "known";
  case VariantChoice::DataDriven:
    return "data_driven";
  case VariantChoice::Both:
    return "both";
  }
  return "?";
}

SequenceSpec RunConfig::sequence_spec() const {
  return SequenceSpec(regime, a, p, s, enforce_pair);
}

void validate(const RunConfig &c) {
  (void)c.sequence_spec();
  if (!(c.sigma >= 0.0))
    throw ConfigError("sigma: constraint sigma >= 0 violated");
  if (!(c.rho > 0.0))
    throw ConfigError("rho: constraint rho > 0 violated");
  if (c.n_grid.empty())
    throw ConfigError("n_grid: must list at least one sample size");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] < 2)
      throw ConfigError("n_grid: constraint n >= 2 violated (n = " +
                        std::to_string(c.n_grid[i]) + ")");
    if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1])
      throw ConfigError("n_grid: must be strictly increasing");
  }
  if (c.replications < 1)
    throw ConfigError("replications: constraint replications >= 1 violated");
  if (!(c.eta >= 1.0))
    throw ConfigError("eta: constraint eta >= 1 violated");
  if (!(c.pen_const_known > 0.0))
    throw ConfigError("pen_const_known: constraint > 0 violated");
  if (!(c.pen_const_unknown > 0.0))
    throw ConfigError("pen_const_unknown: constraint > 0 violated");
  if (c.j_max && *c.j_max < 1)
    throw ConfigError("j_max: constraint j_max >= 1 violated");
}

RunConfig parse_config(std::string_view text,
                       const std::vector<std::string> &overrides) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    assign(kv, line, false, "line " + std::to_string(line_no));
  }
  for (const auto &o : overrides)
    assign(kv, o, true, "override");

  for (const char *key : kRequiredKeys)
    if (!kv.contains(key))
      throw ConfigError("missing required key '" + std::string(key) + "'");

  RunConfig c;
  for (const auto &[key, value] : kv) {
    if (key == "regime")
      c.regime = parse_regime(value);
    else if (key == "a")
      c.a = parse_double(key, value);
    else if (key == "p")
      c.p = parse_double(key, value);
    else if (key == "s")
      c.s = parse_double(key, value);
    else if (key == "sigma")
      c.sigma = parse_double(key, value);
    else if (key == "rho")
      c.rho = parse_double(key, value);
    else if (key == "n_grid")
      c.n_grid = parse_grid(value);
    else if (key == "replications")
      c.replications = parse_integer<std::size_t>(key, value);
    else if (key == "seed")
      c.seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "eta")
      c.eta = parse_double(key, value);
    else if (key == "variant")
      c.variant = parse_variant(value);
    else if (key == "pen_const_known")
      c.pen_const_known = parse_double(key, value);
    else if (key == "pen_const_unknown")
      c.pen_const_unknown = parse_double(key, value);
    else if (key == "enforce_pair")
      c.enforce_pair = parse_bool(key, value);
    else if (key == "j_max")
      c.j_max = parse_integer<std::size_t>(key, value);
    else if (key == "out_dir") {
      if (value.empty())
        throw ConfigError("out_dir: must not be empty");
      c.out_dir = value;
    }
  }
  validate(c);
  return c;
}

std::string serialize_config(const RunConfig &c) {
  std::ostringstream out;
  for (const auto &[k, v] : fields(c))
    out << k << " = " << v << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  return out.str();
}

std::string config_echo(const RunConfig &c) {
  std::string out;
  for (const auto &[k, v] : fields(c)) {
    if (!out.empty())
      out += "; ";
    out += k + "=" + v;
  }
  return out;
}

} // namespace fls
