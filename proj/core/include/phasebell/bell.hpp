#pragma once

#include <array>
#include <span>

#include "phasebell/noise.hpp"
#include "phasebell/states.hpp"
#include "phasebell/types.hpp"

namespace phasebell::bell {

/// Two local settings per party. Index 0 is the unprimed setting.
struct MeasurementSettings {
  cplx alpha{}, alpha_p{};
  cplx beta{}, beta_p{};
  cplx gamma{}, gamma_p{};

  /// Order: (alpha, alpha', beta, beta', gamma, gamma'), real part first.
  static MeasurementSettings from_reals(std::span<const double, 12> x);
  std::array<double, 12> to_reals() const;

  /// Every primed setting exchanged with its unprimed partner.
  MeasurementSettings swapped() const;
  cplx setting(Mode party, int which) const;
  bool finite() const;

  friend bool operator==(const MeasurementSettings&, const MeasurementSettings&) = default;
};

enum class SignChoice : int { Plus = 1, Minus = -1 };

constexpr double sign_value(SignChoice s) noexcept { return s == SignChoice::Plus ? 1.0 : -1.0; }

struct BellResult {
  double mk = 0.0;
  double mk_prime = 0.0;
  double svetlichny = 0.0;
  MeasurementSettings settings;
  SParameter s{0.0};
  SignChoice sign = SignChoice::Plus;
};

/// One state measured at one nominal s through one noise model, prepared
/// for repeated evaluation at many settings. Cheap to copy.
class BellEvaluator {
 public:
  BellEvaluator(const StateSpec& state, SParameter s, const noise::NoiseModel& noise = {});

  /// Expectation of O(a) x O(b) x O(c).
  double correlation(cplx a, cplx b, cplx c) const;

  /// All eight correlators, indexed 4*i + 2*j + k where 0 picks the
  /// unprimed setting of a party and 1 the primed one.
  std::array<double, 8> correlators(const MeasurementSettings& m) const;

  /// Quasiprobability of the modes in `mask` as the noisy detectors see it.
  double measured(unsigned mask, const std::array<cplx, 3>& points) const;

  /// Both MK parameters and the larger Svetlichny value (ties go to +).
  BellResult evaluate(const MeasurementSettings& m) const;

  SParameter s() const noexcept { return s_; }

 private:
  states::PreparedState prepared_;
  noise::Readout readout_;
  SParameter s_;
  double pi_scale_;  // <Pi> = pi_scale * W for one mode
  double coef_pi_;   // O = coef_pi * Pi + coef_one
  double coef_one_;
};

double correlation(const StateSpec& state, cplx a, cplx b, cplx c, SParameter s,
                   const noise::NoiseModel& noise = {});

/// C_112 + C_121 + C_211 - C_222, assembled from correlators.
double mk_parameter(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                    const noise::NoiseModel& noise = {});

/// The same quantity from its expansion over three-, two- and one-mode
/// quasiprobability combinations.
double mk_expansion(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                    const noise::NoiseModel& noise = {});

/// MK parameter with primed and unprimed settings exchanged.
double mk_prime(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                const noise::NoiseModel& noise = {});

/// |M + sign * M'|.
double svetlichny(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                  SignChoice sign, const noise::NoiseModel& noise = {});

BellResult evaluate(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                    const noise::NoiseModel& noise = {});

/// Svetlichny parameter at s = 0 written with Wigner functions only.
double svetlichny_wigner(const StateSpec& state, const MeasurementSettings& m, SignChoice sign);

/// Svetlichny parameter at s = -1 written with Husimi functions and their
/// marginals.
double svetlichny_husimi(const StateSpec& state, const MeasurementSettings& m, SignChoice sign);

}  // namespace phasebell::bell
