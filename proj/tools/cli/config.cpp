#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace regime_eq::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& text) {
  return csv::parse_double(text);
}

std::uint64_t to_count(const std::string& text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw InvalidArgument("not a non-negative integer: '" + text + "'");
  return v;
}

std::vector<double> to_list(const std::string& text) {
  std::vector<double> out;
  for (auto field : csv::split(text)) out.push_back(to_double(trim(field)));
  return out;
}

struct Raw {
  std::array<double, 2> mu{0.15, 0.25}, r{0.05, 0.01}, sigma{0.25, 0.6};
  std::array<double, 2> alpha{2.0, 3.0}, lambda{1.0, 1.0};
  double horizon = 10.0;
};

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  Raw raw;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter, std::less<>> keys{
      {"mu1", [&](const std::string& v) { raw.mu[0] = to_double(v); }},
      {"mu2", [&](const std::string& v) { raw.mu[1] = to_double(v); }},
      {"r1", [&](const std::string& v) { raw.r[0] = to_double(v); }},
      {"r2", [&](const std::string& v) { raw.r[1] = to_double(v); }},
      {"sigma1", [&](const std::string& v) { raw.sigma[0] = to_double(v); }},
      {"sigma2", [&](const std::string& v) { raw.sigma[1] = to_double(v); }},
      {"alpha1", [&](const std::string& v) { raw.alpha[0] = to_double(v); }},
      {"alpha2", [&](const std::string& v) { raw.alpha[1] = to_double(v); }},
      {"lambda1", [&](const std::string& v) { raw.lambda[0] = to_double(v); }},
      {"lambda2", [&](const std::string& v) { raw.lambda[1] = to_double(v); }},
      {"T", [&](const std::string& v) { raw.horizon = to_double(v); }},
      {"t_start", [&](const std::string& v) { cfg.t_start = to_double(v); }},
      {"tolerance", [&](const std::string& v) { cfg.tolerance = to_double(v); }},
      {"n_paths", [&](const std::string& v) { cfg.sim.n_paths = to_count(v); }},
      {"dt", [&](const std::string& v) { cfg.sim.dt = to_double(v); }},
      {"seed", [&](const std::string& v) { cfg.sim.seed = to_count(v); }},
      {"t0", [&](const std::string& v) { cfg.sim.t0 = to_double(v); }},
      {"x0", [&](const std::string& v) { cfg.sim.x0 = to_double(v); }},
      {"perturbation_h", [&](const std::string& v) { cfg.perturbation_h = to_list(v); }},
      {"strategy_points", [&](const std::string& v) { cfg.strategy_points = to_count(v); }},
      {"figure_points", [&](const std::string& v) { cfg.figure_points = to_count(v); }},
      {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
    }
  }

  try {
    cfg.model = Model{MarketParams(raw.r, raw.mu, raw.sigma), Preferences(raw.alpha[0], raw.alpha[1]),
                      RegimeChain(raw.lambda[0], raw.lambda[1]), raw.horizon};
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const double horizon = cfg.model.horizon;
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("T must be positive and finite");
  if (!(cfg.t_start < horizon) || !std::isfinite(cfg.t_start)) throw ConfigError("t_start must be below T");
  if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1.0)) throw ConfigError("tolerance must lie in (0, 1)");
  if (cfg.sim.n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (!(cfg.sim.x0 > 0.0) || !std::isfinite(cfg.sim.x0)) throw ConfigError("x0 must be positive");
  if (!(cfg.sim.t0 >= cfg.t_start && cfg.sim.t0 <= horizon))
    throw ConfigError("t0 must lie in [t_start, T]");
  if (!(cfg.sim.dt > 0.0) || (cfg.sim.t0 < horizon && cfg.sim.dt > horizon - cfg.sim.t0))
    throw ConfigError("dt must satisfy 0 < dt <= T - t0");
  if (cfg.strategy_points < 2 || cfg.figure_points < 2)
    throw ConfigError("strategy_points and figure_points must be at least 2");
  for (double h : cfg.perturbation_h) {
    if (!(h > 0.0)) throw ConfigError("perturbation widths must be positive");
  }
  if (cfg.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string render_config(const RunConfig& cfg) {
  const Model& m = cfg.model;
  std::ostringstream os;
  auto put = [&](std::string_view key, const std::string& value) { os << key << " = " << value << '\n'; };
  auto num = [](double v) { return csv::format(v); };
  for (Regime i : kRegimes) {
    const std::string n = std::to_string(label(i));
    put("mu" + n, num(m.market.drift(i)));
    put("r" + n, num(m.market.rate(i)));
    put("sigma" + n, num(m.market.volatility(i)));
  }
  put("alpha1", num(m.prefs.alpha(Regime::bull)));
  put("alpha2", num(m.prefs.alpha(Regime::bear)));
  put("lambda1", num(m.chain.lambda1()));
  put("lambda2", num(m.chain.lambda2()));
  put("T", num(m.horizon));
  put("t_start", num(cfg.t_start));
  put("tolerance", num(cfg.tolerance));
  put("n_paths", std::to_string(cfg.sim.n_paths));
  put("dt", num(cfg.sim.dt));
  put("seed", std::to_string(cfg.sim.seed));
  put("t0", num(cfg.sim.t0));
  put("x0", num(cfg.sim.x0));
  std::string hs;
  for (double h : cfg.perturbation_h) hs += (hs.empty() ? "" : ", ") + num(h);
  put("perturbation_h", hs);
  put("strategy_points", std::to_string(cfg.strategy_points));
  put("figure_points", std::to_string(cfg.figure_points));
  put("output_dir", cfg.output_dir.string());
  return os.str();
}

}  // namespace regime_eq::cli
