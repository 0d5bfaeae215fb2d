#pragma once

#include <span>
#include <utility>

#include <Eigen/Dense>

#include "phasebell/types.hpp"

namespace phasebell::states {

/// One mode participating in a quasiprobability query: its phase-space
/// point and its own ordering parameter. Modes absent from a query are
/// traced out, so a query over one or two modes yields a marginal.
struct ModeProbe {
  Mode mode;
  cplx point;
  double s;
};

/// Closed-form s-ordered quasiprobability of the listed modes, with a
/// separate s per mode. Probes must name distinct modes; an empty span
/// returns 1 (the trace).
double quasiprobability(const StateSpec& state, std::span<const ModeProbe> probes);

/// Closed forms of one state at fixed per-mode orderings, ready for
/// repeated evaluation. Bit k of `mask` selects mode k; unselected modes
/// are traced out. `points` is indexed by mode.
class PreparedState {
 public:
  PreparedState(const StateSpec& state, const std::array<double, 3>& s_per_mode);

  double operator()(unsigned mask, const std::array<cplx, 3>& points) const;
  const StateSpec& state() const noexcept { return state_; }

 private:
  struct GaussianMarginal {
    Eigen::Matrix<double, 6, 6> precision;
    double norm = 0.0;
    int dims = 0;
  };
  StateSpec state_;
  std::array<double, 3> s_;
  std::array<double, 3> amplitudes_{};
  std::array<GaussianMarginal, 8> gaussian_{};
};

/// Joint three-mode quasiprobability W3(alpha, beta, gamma; s).
double w3(const StateSpec& state, const PhasePoint3& point, SParameter s);

/// Two-mode marginal, the integral of W3 over the remaining mode.
double w2_marginal(const StateSpec& state, std::pair<Mode, Mode> modes, cplx a, cplx b,
                   SParameter s);

/// One-mode marginal.
double w1_marginal(const StateSpec& state, Mode mode, cplx a, SParameter s);

/// Normalization N of N(|z,z,z> - |-z,-z,-z>), with N^2 = 1 / (2 - 2 exp(-6 z^2)).
double ecs_normalization(double zeta);

/// Single-photon amplitudes (c_A, c_B, c_C) of the p-family, so that the
/// state is sum_j c_j a_j^dagger |000>.
std::array<double, 3> single_photon_amplitudes(double p);

/// Gaussian representation of the three-mode squeezed vacuum. Real
/// coordinates are ordered (Re a, Im a, Re b, Im b, Re c, Im c) and the
/// density is proportional to exp(-x^T P x / 2).
namespace msv {

using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Precision matrix P read off the closed-form quasiprobability at a
/// common s for all three modes.
Mat6 precision(double r, double s);

/// Closed-form prefactor 8 / (pi^3 D^{3/2}), D = 1 + s^2 - 2 s cosh 2r.
double prefactor(double r, double s);

/// Wigner (s = 0) covariance of the real coordinates.
Mat6 wigner_covariance(double r);

/// Precision of the marginal over the listed real coordinates, by Schur
/// complement of the full precision.
Eigen::MatrixXd schur_marginal(const Eigen::MatrixXd& precision, std::span<const int> kept);

}  // namespace msv

}  // namespace phasebell::states
