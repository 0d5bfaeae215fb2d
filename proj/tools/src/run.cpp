#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "phasebell/cli/run.hpp"

namespace phasebell::cli {
namespace {

Row make_row(const StateSpec& st, double s, const noise::NoiseModel& nm, const optimize::Optimum& mk,
             const optimize::Optimum& svet) {
  Row r;
  r.state = st.tag();
  r.param = st.parameter();
  r.s = s;
  r.eta = nm.detection ? nm.detection->eta_a : 1.0;
  r.gamma_tau = nm.damping ? nm.damping->gamma_tau : 0.0;
  r.nbar = nm.damping ? nm.damping->nbar : 0.0;
  r.sign = static_cast<int>(svet.sign);
  r.mk = mk.value;
  r.svet = svet.value;
  r.settings = svet.settings;
  return r;
}

Row optimized_row(const StateSpec& st, double s, const noise::NoiseModel& nm,
                  const optimize::OptimizerConfig& opt) {
  const SParameter sp(s);
  return make_row(st, s, nm, optimize::maximize_mk(st, sp, opt, nm), optimize::maximize_svetlichny(st, sp, opt, nm));
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + cfg.output + " for writing");
  f << text;
  f.close();
  if (!f) throw IoError("write to " + cfg.output + " failed");
}

std::string render(const RunConfig& cfg, std::span<const Row> rows) {
  std::ostringstream out;
  if (cfg.format == Format::Json)
    emit_json(out, rows);
  else
    emit_csv(out, rows);
  return out.str();
}

int run_oracle(const RunConfig& cfg, std::ostream& log) {
  const StateSpec st = cfg.state_spec();
  const auto samples = oracle_check(st, cfg.samples, cfg.optimizer.rng_seed);
  const double tol = oracle_tolerance(st);
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, x.abs_error());
  const bool ok = worst < tol;

  std::ostringstream out;
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  if (cfg.format == Format::Json) {
    nlohmann::ordered_json doc;
    doc["state"] = st.tag();
    doc["param"] = st.parameter();
    doc["tolerance"] = tol;
    doc["max_abs_error"] = worst;
    doc["passed"] = ok;
    auto& arr = doc["samples"] = nlohmann::ordered_json::array();
    for (const auto& x : samples)
      arr.push_back({{"quantity", x.quantity}, {"sample", x.sample}, {"closed_form", x.closed_form},
                     {"oracle", x.oracle}, {"abs_error", x.abs_error()}});
    out << doc.dump(2) << '\n';
  } else {
    out << kOracleHeader << '\n';
    for (const auto& x : samples)
      out << st.tag() << ',' << fmt(st.parameter()) << ',' << x.quantity << ',' << x.sample << ','
          << fmt(x.closed_form) << ',' << fmt(x.oracle) << ',' << fmt(x.abs_error()) << '\n';
  }
  write_output(cfg, out.str());
  log << "oracle-check " << st.tag() << " " << st.parameter() << ": " << samples.size()
      << " comparisons, max |error| " << worst << (ok ? " < " : " >= ") << tol << '\n';
  return ok ? kExitOk : kExitOracle;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto& opt = cfg.optimizer;
  std::vector<Row> rows;
  switch (cfg.command) {
    case Command::OracleCheck:
      return run_oracle(cfg, log);

    case Command::Optimize: {
      const StateSpec st = cfg.state_spec();
      rows.push_back(optimized_row(st, cfg.s, cfg.noise_model(), opt));
      break;
    }

    case Command::ScanS: {
      const StateSpec st = cfg.state_spec();
      const auto grid = cfg.s_grid();
      const auto nm = cfg.noise_model();
      for (const auto& p : optimize::scan_s(st, grid, opt, nm)) rows.push_back(make_row(st, p.s, nm, p.mk, p.svetlichny));
      break;
    }

    case Command::EffThreshold: {
      const StateSpec st = cfg.state_spec();
      const double bound = cfg.objective == "mk" ? 2.0 : 4.0;
      const auto eta = optimize::threshold_efficiency(st, SParameter(cfg.s), bound, opt);
      if (eta) {
        log << "threshold efficiency " << *eta << " (+-0.002)\n";
        const noise::NoiseModel nm{std::nullopt, noise::DetectionEfficiency::symmetric(*eta)};
        rows.push_back(optimized_row(st, cfg.s, nm, opt));
      } else {
        log << "no violation with ideal detectors\n";
        Row r = optimized_row(st, cfg.s, {}, opt);
        r.eta = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(r);
      }
      break;
    }

    case Command::DampingCurve: {
      const StateSpec st = cfg.state_spec();
      const SParameter s(cfg.s);
      std::vector<noise::ThermalChannel> channels;
      const auto n = static_cast<long>(std::floor(cfg.gamma_max / cfg.gamma_step + 1e-9));
      for (long i = 0; i <= n; ++i) channels.push_back({static_cast<double>(i) * cfg.gamma_step, cfg.nbar});
      const auto curve = optimize::damping_curve(st, s, channels, opt);
      for (std::size_t i = 0; i < curve.size(); ++i) {
        const noise::NoiseModel nm{channels[i], std::nullopt};
        rows.push_back(make_row(st, cfg.s, nm, optimize::maximize_mk(st, s, opt, nm), curve[i].svetlichny));
      }
      break;
    }

    case Command::Crossing: {
      const double z = optimize::crossing_amplitude(opt, cfg.zeta_lo, cfg.zeta_hi);
      log << "crossing amplitude zeta* = " << z << " (+-0.0025)\n";
      rows.push_back(optimized_row(StateSpec::ghz_ecs(z), 0.0, {}, opt));
      break;
    }
  }
  write_output(cfg, render(cfg, rows));
  return kExitOk;
}

}  // namespace phasebell::cli
