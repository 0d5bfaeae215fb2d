#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasebell/cli/run.hpp"

namespace phasebell::cli {
namespace {

using json = nlohmann::json;

struct StateParams {
  std::optional<double> p, r, zeta, param;
};

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"scan-s", Command::ScanS},           {"optimize", Command::Optimize},
      {"eff-threshold", Command::EffThreshold}, {"damping-curve", Command::DampingCurve},
      {"crossing", Command::Crossing},      {"oracle-check", Command::OracleCheck}};
  return names;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

long long integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<long long>();
}

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::Csv;
  if (f == "json") return Format::Json;
  throw ConfigError("unknown output format '" + f + "' (csv or json)");
}

void load_file(const std::string& path, RunConfig& cfg, StateParams& sp, std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold one flat object");

  using Setter = std::function<void(const json&, const std::string&)>;
  auto num = [](double& dst) -> Setter { return [&dst](const json& v, const std::string& k) { dst = number(v, k); }; };
  auto opt = [](std::optional<double>& dst) -> Setter {
    return [&dst](const json& v, const std::string& k) { dst = number(v, k); };
  };
  auto& o = cfg.optimizer;
  const std::map<std::string, Setter> setters{
      {"command", [&](const json& v, const std::string& k) { command = text(v, k); }},
      {"state", [&](const json& v, const std::string& k) { cfg.state = text(v, k); }},
      {"p", opt(sp.p)},
      {"r", opt(sp.r)},
      {"zeta", opt(sp.zeta)},
      {"param", opt(sp.param)},
      {"s", num(cfg.s)},
      {"s-min", num(cfg.s_min)},
      {"s-max", num(cfg.s_max)},
      {"step", num(cfg.s_step)},
      {"eta", num(cfg.eta)},
      {"gamma-tau", num(cfg.gamma_tau)},
      {"nbar", num(cfg.nbar)},
      {"gamma-max", num(cfg.gamma_max)},
      {"gamma-step", num(cfg.gamma_step)},
      {"objective", [&](const json& v, const std::string& k) { cfg.objective = text(v, k); }},
      {"zeta-lo", num(cfg.zeta_lo)},
      {"zeta-hi", num(cfg.zeta_hi)},
      {"samples", [&](const json& v, const std::string& k) { cfg.samples = static_cast<int>(integer(v, k)); }},
      {"restarts", [&](const json& v, const std::string& k) { o.multistart_count = static_cast<int>(integer(v, k)); }},
      {"max-iter", [&](const json& v, const std::string& k) { o.max_iterations = static_cast<int>(integer(v, k)); }},
      {"tol", num(o.tolerance)},
      {"seed", [&](const json& v, const std::string& k) { o.rng_seed = static_cast<std::uint64_t>(integer(v, k)); }},
      {"search-scale", num(o.search_scale)},
      {"threads", [&](const json& v, const std::string& k) { o.threads = static_cast<int>(integer(v, k)); }},
      {"output", [&](const json& v, const std::string& k) { cfg.output = text(v, k); }},
      {"format", [&](const json& v, const std::string& k) { cfg.format = parse_format(text(v, k)); }},
  };
  for (const auto& [key, value] : doc.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '_', '-');
    const auto it = setters.find(k);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(value, key);
  }
}

std::optional<double> resolve_param(const std::string& state, const StateParams& sp) {
  const std::pair<const char*, const std::optional<double>*> named[] = {{"w", &sp.p}, {"msv", &sp.r}, {"ecs", &sp.zeta}};
  std::optional<double> out = sp.param;
  for (const auto& [tag, value] : named) {
    if (!value->has_value()) continue;
    if (state != tag)
      throw ConfigError(std::string("parameter for state '") + tag + "' given with --state " + state);
    out = *value;
  }
  return out;
}

}  // namespace

StateSpec RunConfig::state_spec() const {
  if (!param) throw ConfigError("state parameter missing (--p, --r or --zeta)");
  try {
    if (state == "w") return StateSpec::single_photon_w(*param);
    if (state == "msv") return StateSpec::squeezed_vacuum3(*param);
    if (state == "ecs") return StateSpec::ghz_ecs(*param);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown state '" + state + "' (w, msv or ecs)");
}

noise::NoiseModel RunConfig::noise_model() const {
  noise::NoiseModel nm;
  if (eta != 1.0) nm.detection = noise::DetectionEfficiency::symmetric(eta);
  if (gamma_tau != 0.0 || nbar != 0.0) nm.damping = noise::ThermalChannel{gamma_tau, nbar};
  return nm;
}

std::vector<double> RunConfig::s_grid() const {
  std::vector<double> grid;
  const double span = s_max - s_min;
  const auto n = static_cast<long>(std::floor(span / s_step + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(std::min(0.0, s_min + static_cast<double>(i) * s_step));
  return grid;
}

void RunConfig::validate() const {
  try {
    optimizer.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (command != Command::Crossing) (void)state_spec();
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(std::isfinite(s) && s <= 0.0, "s must be finite and <= 0");
  need(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
  need(gamma_tau >= 0.0 && std::isfinite(gamma_tau), "gamma-tau must be >= 0");
  need(nbar >= 0.0 && std::isfinite(nbar), "nbar must be >= 0");
  switch (command) {
    case Command::ScanS:
      need(s_step > 0.0, "step must be > 0");
      need(s_min <= s_max && s_max <= 0.0, "need s-min <= s-max <= 0");
      need(s_grid().size() <= 100000, "s grid too large");
      break;
    case Command::EffThreshold:
      need(objective == "svet" || objective == "mk", "objective must be svet or mk");
      break;
    case Command::DampingCurve:
      need(gamma_step > 0.0 && gamma_max >= 0.0, "need gamma-step > 0 and gamma-max >= 0");
      break;
    case Command::Crossing:
      need(0.0 < zeta_lo && zeta_lo < zeta_hi, "need 0 < zeta-lo < zeta-hi");
      break;
    case Command::OracleCheck:
      need(samples >= 1, "samples must be >= 1");
      break;
    case Command::Optimize:
      break;
  }
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  StateParams sp;
  std::string command;
  if (const char* env = std::getenv("PHASEBELL_THREADS")) {
    try {
      cfg.optimizer.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("PHASEBELL_THREADS must be an integer");
    }
  }

  // The config file is read before the flags so that flags override it.
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
    if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  }
  if (!config_path.empty()) load_file(config_path, cfg, sp, command);

  CLI::App app{"Phase-space Bell tests for three-mode states of light", "phasebell"};
  app.option_defaults()->always_capture_default();
  std::string format = cfg.format == Format::Json ? "json" : "csv";
  auto& o = cfg.optimizer;
  app.add_option("--config", config_path, "flat JSON object with default option values");
  app.add_option("--state", cfg.state, "w, msv or ecs");
  app.add_option("--p", sp.p, "single-photon W family parameter");
  app.add_option("--r", sp.r, "squeezing of the three-mode squeezed vacuum");
  app.add_option("--zeta", sp.zeta, "coherent amplitude of the entangled coherent state");
  app.add_option("--param", sp.param, "state parameter under any family");
  app.add_option("--s", cfg.s, "ordering parameter (<= 0)");
  app.add_option("--s-min", cfg.s_min);
  app.add_option("--s-max", cfg.s_max);
  app.add_option("--step", cfg.s_step, "s grid spacing");
  app.add_option("--eta", cfg.eta, "symmetric detection efficiency");
  app.add_option("--gamma-tau", cfg.gamma_tau, "damping time Gamma*tau");
  app.add_option("--nbar", cfg.nbar, "thermal bath occupation");
  app.add_option("--gamma-max", cfg.gamma_max);
  app.add_option("--gamma-step", cfg.gamma_step);
  app.add_option("--objective", cfg.objective, "svet or mk");
  app.add_option("--zeta-lo", cfg.zeta_lo);
  app.add_option("--zeta-hi", cfg.zeta_hi);
  app.add_option("--samples", cfg.samples, "oracle-check samples per quantity");
  app.add_option("--restarts", o.multistart_count, "optimizer restarts");
  app.add_option("--max-iter", o.max_iterations, "objective evaluations per local search");
  app.add_option("--tol", o.tolerance);
  app.add_option("--seed", o.rng_seed);
  app.add_option("--search-scale", o.search_scale, "spread of random starts (0: state default)");
  app.add_option("--threads", o.threads, "worker threads (default $PHASEBELL_THREADS or 1)");
  app.add_option("-o,--output", cfg.output, "result file (stdout when absent)");
  app.add_option("--format", format, "csv or json");

  const std::map<Command, const char*> about{
      {Command::ScanS, "optimized MK and Svetlichny values over an s grid"},
      {Command::Optimize, "optimized values at a single s"},
      {Command::EffThreshold, "smallest detection efficiency that still violates"},
      {Command::DampingCurve, "optimized Svetlichny value against damping time"},
      {Command::Crossing, "ECS amplitude where s = -1 and s = 0 tests tie"},
      {Command::OracleCheck, "closed forms against number-basis traces"}};
  for (const auto& [name, cmd] : command_names()) app.add_subcommand(name, about.at(cmd))->fallthrough();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  if (command.empty()) throw ConfigError("no command given; " + app.help());
  const auto it = command_names().find(command);
  if (it == command_names().end()) throw ConfigError("unknown command '" + command + "'");
  cfg.command = it->second;
  cfg.format = parse_format(format);
  cfg.param = resolve_param(cfg.state, sp);
  cfg.validate();
  return cfg;
}

}  // namespace phasebell::cli
