#pragma once

#include <array>
#include <optional>
#include <span>

#include "phasebell/states.hpp"
#include "phasebell/types.hpp"

namespace phasebell::noise {

/// Per-detector efficiencies, each in (0, 1].
struct DetectionEfficiency {
  double eta_a = 1.0;
  double eta_b = 1.0;
  double eta_c = 1.0;

  static DetectionEfficiency symmetric(double eta) { return {eta, eta, eta}; }
  double operator[](Mode m) const noexcept;
  void validate() const;
};

/// Local amplitude damping of every mode into its own thermal bath for a
/// dimensionless time gamma_tau = Gamma * tau.
struct ThermalChannel {
  double gamma_tau = 0.0;
  double nbar = 0.0;
  void validate() const;
};

/// Noise applied before the local measurements. When both are present the
/// channel acts first and the detector second.
struct NoiseModel {
  std::optional<ThermalChannel> damping;
  std::optional<DetectionEfficiency> detection;

  bool ideal() const noexcept { return !damping && !detection; }
};

/// How one mode's measured quasiprobability relates to the ideal one:
/// W_measured(x) = weight * W_ideal(x / scale; s).
struct ModeResponse {
  double s;
  double scale = 1.0;
  double weight = 1.0;
};
using Readout = std::array<ModeResponse, 3>;

/// Readout of every mode for a test nominally built at `s`.
Readout readout(SParameter s, const NoiseModel& noise);

/// s' = -(1 - s - eta) / eta: the ordering a detector of efficiency eta
/// effectively probes.
SParameter effective_s_detection(SParameter s, double eta);

struct DampedOrdering {
  double s_prime;
  double t;  // amplitude transmission exp(-gamma_tau / 2)
};

/// s'(tau) = (s - r^2 (1 + 2 nbar)) / t^2 with t^2 = exp(-gamma_tau), r^2 = 1 - t^2.
DampedOrdering effective_s_damping(SParameter s, const ThermalChannel& ch);

/// Measured three-mode quasiprobability W3(x; s'_j) / (eta_a eta_b eta_c).
double measured_w3_detection(const StateSpec& state, const PhasePoint3& point, SParameter s,
                             const DetectionEfficiency& eff);

/// Quasiprobability of the damped state, t^-6 W3(x / t; s'(tau)).
double damped_w3(const StateSpec& state, const PhasePoint3& point, SParameter s,
                 const ThermalChannel& ch);

/// s-ordered quasiprobability of a thermal state with mean occupation nbar.
double thermal_w1(cplx a, double nbar, SParameter s);

/// Quasiprobability of the listed modes as seen through `readout`; modes
/// not listed are traced out.
double measured_quasiprobability(const StateSpec& state, std::span<const Mode> modes,
                                 std::span<const cplx> points, const Readout& readout);

struct ConvolutionGrid {
  int nodes_per_axis = 10;
  long long max_evaluations = 50'000'000;
};

/// Damped W3 by explicit six-dimensional convolution of the initial
/// quasiprobability with three thermal kernels (Gauss-Hermite nodes over
/// each real axis). Only meant to validate damped_w3.
double convolution_check(const StateSpec& state, const PhasePoint3& point, SParameter s,
                         const ThermalChannel& ch, ConvolutionGrid grid = {});

}  // namespace phasebell::noise
