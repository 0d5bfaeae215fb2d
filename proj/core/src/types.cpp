#include "phasebell/types.hpp"

#include <cmath>

namespace phasebell {

SParameter::SParameter(double s) : s_(s) {
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  if (s > 0.0) throw DomainError("s must be <= 0, got " + std::to_string(s));
}

Mode mode_from_index(int i) {
  if (i < 0 || i > 2) throw DimensionError("mode index must be 0, 1 or 2");
  return static_cast<Mode>(i);
}

bool PhasePoint3::finite() const noexcept {
  auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return ok(alpha) && ok(beta) && ok(gamma);
}

StateSpec StateSpec::single_photon_w(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("single-photon W state needs 0 <= p <= 1");
  return StateSpec(SinglePhotonW{p});
}

StateSpec StateSpec::squeezed_vacuum3(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("squeezing r must be >= 0");
  return StateSpec(SqueezedVacuum3{r});
}

StateSpec StateSpec::ghz_ecs(double zeta) {
  // zeta = 0 makes the normalization diverge; the W state with p = 1 is
  // the limiting state.
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw DomainError("ECS amplitude zeta must be > 0");
  return StateSpec(GhzEcs{zeta});
}

double StateSpec::parameter() const noexcept {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SinglePhotonW>) return f.p;
        else if constexpr (std::is_same_v<T, SqueezedVacuum3>) return f.r;
        else return f.zeta;
      },
      family_);
}

std::string StateSpec::tag() const {
  switch (family_.index()) {
    case 0: return "w";
    case 1: return "msv";
    default: return "ecs";
  }
}

}  // namespace phasebell
