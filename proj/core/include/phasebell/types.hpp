#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

namespace phasebell {

using cplx = std::complex<double>;

/// Raised when a physical parameter leaves its admissible range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the Fock backend when the basis cannot hold the state.
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a requested quadrature grid is too large to evaluate.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordering parameter of the quasiprobability family: 0 is Wigner, -1 is
/// Husimi. Values above zero are rejected since the displaced-number-state
/// weights [(s+1)/(s-1)]^n are then unbounded.
class SParameter {
 public:
  explicit SParameter(double s);

  double value() const noexcept { return s_; }
  /// True when the measurement operator uses the 2*Pi - 1 form.
  bool lower_branch() const noexcept { return s_ <= -1.0; }

  friend bool operator==(SParameter, SParameter) = default;

 private:
  double s_;
};

enum class Mode : int { A = 0, B = 1, C = 2 };

constexpr int index(Mode m) noexcept { return static_cast<int>(m); }
Mode mode_from_index(int i);

/// Three-mode phase-space coordinate (alpha, beta, gamma).
struct PhasePoint3 {
  cplx alpha{};
  cplx beta{};
  cplx gamma{};

  cplx operator[](Mode m) const noexcept {
    switch (m) {
      case Mode::A: return alpha;
      case Mode::B: return beta;
      default: return gamma;
    }
  }
  bool finite() const noexcept;
};

struct SinglePhotonW {
  double p;
};
struct SqueezedVacuum3 {
  double r;
};
struct GhzEcs {
  double zeta;
};

/// One of the three analyzed three-mode families together with its real
/// parameter. Construction validates the parameter.
class StateSpec {
 public:
  using Family = std::variant<SinglePhotonW, SqueezedVacuum3, GhzEcs>;

  static StateSpec single_photon_w(double p);
  static StateSpec squeezed_vacuum3(double r);
  static StateSpec ghz_ecs(double zeta);

  const Family& family() const noexcept { return family_; }
  double parameter() const noexcept;
  /// Short tag used by the CLI and CSV output: "w", "msv" or "ecs".
  std::string tag() const;

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), family_);
  }

 private:
  explicit StateSpec(Family f) : family_(f) {}
  Family family_;
};

}  // namespace phasebell
