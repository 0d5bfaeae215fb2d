#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phasebell/bell.hpp"
#include "phasebell/noise.hpp"

namespace phasebell::optimize {

struct OptimizerConfig {
  int multistart_count = 32;
  int max_iterations = 6000;  // objective evaluations per local search
  double tolerance = 1e-10;
  std::uint64_t rng_seed = 20140917;
  /// Standard deviation of the random starting displacements; zero picks a
  /// default from the state (1 for the W family, max(1, zeta) for the ECS,
  /// e^r for the squeezed vacuum).
  double search_scale = 0.0;
  int threads = 1;

  void validate() const;
};

double default_search_scale(const StateSpec& state);

struct Optimum {
  double value = 0.0;
  bell::MeasurementSettings settings;
  bell::SignChoice sign = bell::SignChoice::Plus;
  bool converged = false;
};

enum class Objective { Mk, Svetlichny };

/// Multistart maximization of |M| or of max over sign of |M +- M'|.
/// `warm` settings are tried first, before the structured and random starts.
Optimum maximize(const StateSpec& state, SParameter s, Objective objective,
                 const OptimizerConfig& cfg, const noise::NoiseModel& noise = {},
                 std::span<const bell::MeasurementSettings> warm = {});

Optimum maximize_svetlichny(const StateSpec& state, SParameter s, const OptimizerConfig& cfg,
                            const noise::NoiseModel& noise = {});
Optimum maximize_mk(const StateSpec& state, SParameter s, const OptimizerConfig& cfg,
                    const noise::NoiseModel& noise = {});

struct ScanPoint {
  double s;
  Optimum mk;
  Optimum svetlichny;
};

/// Optimized MK and Svetlichny values along a grid of s, each point
/// warm-started from its predecessor's optima.
std::vector<ScanPoint> scan_s(const StateSpec& state, std::span<const double> s_grid,
                              const OptimizerConfig& cfg, const noise::NoiseModel& noise = {});

/// Smallest symmetric detection efficiency at which the optimized value
/// still exceeds `bound` (2 for MK, 4 for Svetlichny), to within 0.002.
/// Empty when ideal detectors already show no violation.
std::optional<double> threshold_efficiency(const StateSpec& state, SParameter s, double bound,
                                           const OptimizerConfig& cfg);

/// ECS amplitude at which the optimized Svetlichny values at s = -1 and
/// s = 0 coincide, to within 0.005, searched in [lo, hi].
double crossing_amplitude(const OptimizerConfig& cfg, double lo = 0.2, double hi = 0.8);

struct DampingPoint {
  double gamma_tau;
  Optimum svetlichny;
};

std::vector<DampingPoint> damping_curve(const StateSpec& state, SParameter s,
                                        std::span<const noise::ThermalChannel> channels,
                                        const OptimizerConfig& cfg);

/// Damping time at which the optimized Svetlichny value drops to 4, to
/// within 0.005. Empty without violation at zero time; infinity if the
/// violation survives up to gamma_max.
std::optional<double> damping_lifetime(const StateSpec& state, SParameter s, double nbar,
                                       const OptimizerConfig& cfg, double gamma_max = 3.0);

}  // namespace phasebell::optimize
