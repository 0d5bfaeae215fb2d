#include "phasebell/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "phasebell/nelder_mead.hpp"

namespace phasebell::optimize {
namespace {

using bell::MeasurementSettings;

MeasurementSettings symmetric(cplx u, cplx v) { return {u, v, u, v, u, v}; }

// Starting point number `k` after the warm starts. Every fourth start is
// symmetric under permutation of the parties, the next one additionally
// purely imaginary (the ECS interference term only sees the imaginary
// parts), the rest are unstructured.
MeasurementSettings seed_settings(std::uint64_t seed, std::size_t k, double scale) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> g(0.0, scale / std::sqrt(2.0));
  auto z = [&] { return cplx(g(rng), g(rng)); };
  switch (k % 4) {
    case 0: return symmetric(z(), z());
    case 1: {
      // Cycle through narrow and full widths: for large cat amplitudes the
      // useful displacements shrink like 1 / zeta.
      constexpr double shrink[3] = {0.25, 0.06, 1.0};
      const double w = shrink[(k / 4) % 3];
      return symmetric(cplx(0.0, w * g(rng)), cplx(0.0, w * g(rng)));
    }
    default: return {z(), z(), z(), z(), z(), z()};
  }
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::array<double, 12> x{};
  bool converged = false;
};

// Larger value wins; equal values fall back to the lexicographically
// smaller settings so the reduction is independent of completion order.
bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.x < b.x;
}

double objective_value(const bell::BellEvaluator& ev, Objective obj, const MeasurementSettings& m) {
  const auto r = ev.evaluate(m);
  return obj == Objective::Mk ? std::abs(r.mk) : r.svetlichny;
}

Candidate local_search(const bell::BellEvaluator& ev, Objective obj, const MeasurementSettings& start,
                       const OptimizerConfig& cfg, double scale) {
  auto f = [&](const std::vector<double>& v) {
    return -objective_value(ev, obj, MeasurementSettings::from_reals(std::span<const double, 12>(v.data(), 12)));
  };
  const auto x0 = start.to_reals();
  opt::SimplexOptions opts;
  opts.max_evaluations = cfg.max_iterations;
  opts.f_tolerance = cfg.tolerance;
  opts.x_tolerance = 1e-7;
  opts.initial_step = 0.3 * scale;
  auto res = opt::nelder_mead(f, std::vector<double>(x0.begin(), x0.end()), opts);
  // Restarting the simplex around the best vertex escapes the collapsed
  // simplices Nelder-Mead is prone to in a dozen dimensions.
  for (int round = 0; round < 4; ++round) {
    opts.initial_step = std::max(0.02 * scale, opts.initial_step * 0.3);
    auto again = opt::nelder_mead(f, res.x, opts);
    const bool stalled = again.value >= res.value - cfg.tolerance;
    const bool settled = res.converged || again.converged;
    if (again.value <= res.value) res = std::move(again);
    if (stalled) {
      res.converged = settled;
      break;
    }
  }
  Candidate c;
  c.value = -res.value;
  std::copy(res.x.begin(), res.x.end(), c.x.begin());
  c.converged = res.converged;
  return c;
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

// Far-away settings reach the classical bounds exactly, so a violation must
// clear the bound by more than rounding noise.
constexpr double kViolationMargin = 1e-6;

template <class F>
double bisect(double lo, double hi, double width, F&& violated) {
  // Invariant: violated(hi) is true, violated(lo) is false.
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (violated(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (multistart_count < 1) throw DomainError("multistart_count must be >= 1");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be > 0");
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (!(search_scale >= 0.0) || !std::isfinite(search_scale)) throw DomainError("search_scale must be >= 0");
  if (threads < 1) throw DomainError("threads must be >= 1");
}

double default_search_scale(const StateSpec& state) {
  return state.visit([](const auto& f) -> double {
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, SinglePhotonW>) return 1.0;
    else if constexpr (std::is_same_v<T, GhzEcs>) return std::max(1.0, f.zeta);
    else return std::exp(f.r);
  });
}

Optimum maximize(const StateSpec& state, SParameter s, Objective objective, const OptimizerConfig& cfg,
                 const noise::NoiseModel& noise, std::span<const MeasurementSettings> warm) {
  cfg.validate();
  const double scale = cfg.search_scale > 0.0 ? cfg.search_scale : default_search_scale(state);
  const bell::BellEvaluator ev(state, s, noise);
  const std::size_t n = warm.size() + static_cast<std::size_t>(cfg.multistart_count);
  std::vector<Candidate> found(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto start = i < warm.size() ? warm[i] : seed_settings(cfg.rng_seed, i - warm.size(), scale);
    found[i] = local_search(ev, objective, start, cfg, scale);
  });
  Candidate best = found.front();
  for (const auto& c : found)
    if (better(c, best)) best = c;

  Optimum out;
  out.settings = MeasurementSettings::from_reals(best.x);
  out.converged = best.converged;
  const auto r = ev.evaluate(out.settings);
  if (objective == Objective::Mk) {
    out.value = std::abs(r.mk);
  } else {
    out.value = r.svetlichny;
    out.sign = r.sign;
  }
  return out;
}

Optimum maximize_svetlichny(const StateSpec& state, SParameter s, const OptimizerConfig& cfg,
                            const noise::NoiseModel& noise) {
  return maximize(state, s, Objective::Svetlichny, cfg, noise);
}

Optimum maximize_mk(const StateSpec& state, SParameter s, const OptimizerConfig& cfg,
                    const noise::NoiseModel& noise) {
  return maximize(state, s, Objective::Mk, cfg, noise);
}

std::vector<ScanPoint> scan_s(const StateSpec& state, std::span<const double> s_grid,
                              const OptimizerConfig& cfg, const noise::NoiseModel& noise) {
  std::vector<ScanPoint> out;
  out.reserve(s_grid.size());
  for (double sv : s_grid) {
    const SParameter s(sv);
    std::vector<MeasurementSettings> warm;
    if (!out.empty()) warm = {out.back().mk.settings, out.back().svetlichny.settings};
    ScanPoint p{sv, maximize(state, s, Objective::Mk, cfg, noise, warm),
                maximize(state, s, Objective::Svetlichny, cfg, noise, warm)};
    out.push_back(p);
  }
  return out;
}

std::optional<double> threshold_efficiency(const StateSpec& state, SParameter s, double bound,
                                           const OptimizerConfig& cfg) {
  if (bound != 2.0 && bound != 4.0) throw DomainError("bound must be 2 (MK) or 4 (Svetlichny)");
  const Objective obj = bound == 2.0 ? Objective::Mk : Objective::Svetlichny;
  const Optimum ideal = maximize(state, s, obj, cfg);
  if (ideal.value <= bound + kViolationMargin) return std::nullopt;

  std::vector<MeasurementSettings> warm{ideal.settings};
  auto violated = [&](double eta) {
    const noise::NoiseModel nm{std::nullopt, noise::DetectionEfficiency::symmetric(eta)};
    const Optimum o = maximize(state, s, obj, cfg, nm, warm);
    const bool v = o.value > bound + kViolationMargin;
    if (v) warm = {o.settings, ideal.settings};
    return v;
  };
  double lo = 0.5;
  while (violated(lo)) {
    if (lo < 0.01) return lo;
    lo *= 0.5;
  }
  return bisect(lo, 1.0, 0.002, violated);
}

double crossing_amplitude(const OptimizerConfig& cfg, double lo, double hi) {
  auto husimi_ahead = [&](double zeta) {
    const auto st = StateSpec::ghz_ecs(zeta);
    return maximize_svetlichny(st, SParameter(-1.0), cfg).value >
           maximize_svetlichny(st, SParameter(0.0), cfg).value;
  };
  if (!husimi_ahead(lo) || husimi_ahead(hi))
    throw DomainError("crossing is not bracketed by the search interval");
  // Here the "violated" side is the upper end, where s = 0 wins.
  double a = lo, b = hi;
  while (b - a > 0.005) {
    const double mid = 0.5 * (a + b);
    if (husimi_ahead(mid))
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

std::vector<DampingPoint> damping_curve(const StateSpec& state, SParameter s,
                                        std::span<const noise::ThermalChannel> channels,
                                        const OptimizerConfig& cfg) {
  std::vector<DampingPoint> out;
  std::vector<MeasurementSettings> warm;
  for (const auto& ch : channels) {
    const noise::NoiseModel nm{ch, std::nullopt};
    const Optimum o = maximize(state, s, Objective::Svetlichny, cfg, nm, warm);
    warm = {o.settings};
    out.push_back({ch.gamma_tau, o});
  }
  return out;
}

std::optional<double> damping_lifetime(const StateSpec& state, SParameter s, double nbar,
                                       const OptimizerConfig& cfg, double gamma_max) {
  std::vector<MeasurementSettings> warm;
  auto alive = [&](double gt) {
    const noise::NoiseModel nm{noise::ThermalChannel{gt, nbar}, std::nullopt};
    const Optimum o = maximize(state, s, Objective::Svetlichny, cfg, nm, warm);
    const bool v = o.value > 4.0 + kViolationMargin;
    if (v) warm = {o.settings};
    return v;
  };
  if (!alive(0.0)) return std::nullopt;
  if (alive(gamma_max)) return std::numeric_limits<double>::infinity();
  double a = 0.0, b = gamma_max;
  while (b - a > 0.005) {
    const double mid = 0.5 * (a + b);
    if (alive(mid))
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace phasebell::optimize
