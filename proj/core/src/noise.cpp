#include "phasebell/noise.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

namespace phasebell::noise {
namespace {

using std::numbers::pi;

// Golub-Welsch nodes and weights for the weight function exp(-x^2).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jac(i, i - 1) = std::sqrt(0.5 * i);
    jac(i - 1, i) = jac(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = std::sqrt(pi) * v0 * v0;
  }
}

}  // namespace

double DetectionEfficiency::operator[](Mode m) const noexcept {
  switch (m) {
    case Mode::A: return eta_a;
    case Mode::B: return eta_b;
    default: return eta_c;
  }
}

void DetectionEfficiency::validate() const {
  for (double e : {eta_a, eta_b, eta_c})
    if (!(e > 0.0 && e <= 1.0)) throw DomainError("detection efficiency must lie in (0, 1]");
}

void ThermalChannel::validate() const {
  if (!(gamma_tau >= 0.0) || !std::isfinite(gamma_tau)) throw DomainError("gamma_tau must be >= 0");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("nbar must be >= 0");
}

SParameter effective_s_detection(SParameter s, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("detection efficiency must lie in (0, 1]");
  if (eta == 1.0) return s;
  return SParameter(-(1.0 - s.value() - eta) / eta);
}

DampedOrdering effective_s_damping(SParameter s, const ThermalChannel& ch) {
  ch.validate();
  if (ch.gamma_tau == 0.0) return {s.value(), 1.0};
  const double t2 = std::exp(-ch.gamma_tau);
  const double r2 = -std::expm1(-ch.gamma_tau);
  return {(s.value() - r2 * (1.0 + 2.0 * ch.nbar)) / t2, std::sqrt(t2)};
}

Readout readout(SParameter s, const NoiseModel& noise) {
  Readout out;
  for (int m = 0; m < 3; ++m) {
    ModeResponse resp{s.value(), 1.0, 1.0};
    // The detector sees the damped state: W_meas(x; s) = W_damped(x; s_det) / eta
    // and W_damped(x; u) = W(x / t; u') / t^2.
    double s_det = s.value();
    if (noise.detection) {
      noise.detection->validate();
      const double eta = (*noise.detection)[mode_from_index(m)];
      s_det = effective_s_detection(s, eta).value();
      resp.weight /= eta;
    }
    resp.s = s_det;
    if (noise.damping) {
      const auto d = effective_s_damping(SParameter(s_det), *noise.damping);
      resp.s = d.s_prime;
      resp.scale = d.t;
      resp.weight /= d.t * d.t;
    }
    out[static_cast<std::size_t>(m)] = resp;
  }
  return out;
}

double measured_quasiprobability(const StateSpec& state, std::span<const Mode> modes,
                                 std::span<const cplx> points, const Readout& readout) {
  if (modes.size() != points.size()) throw DimensionError("one point per mode required");
  std::array<states::ModeProbe, 3> probes{};
  double weight = 1.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& r = readout[static_cast<std::size_t>(index(modes[k]))];
    probes[k] = {modes[k], points[k] / r.scale, r.s};
    weight *= r.weight;
  }
  return weight * states::quasiprobability(state, std::span(probes.data(), modes.size()));
}

double measured_w3_detection(const StateSpec& state, const PhasePoint3& point, SParameter s,
                             const DetectionEfficiency& eff) {
  const Readout r = readout(s, NoiseModel{std::nullopt, eff});
  const Mode modes[3] = {Mode::A, Mode::B, Mode::C};
  const cplx pts[3] = {point.alpha, point.beta, point.gamma};
  return measured_quasiprobability(state, modes, pts, r);
}

double damped_w3(const StateSpec& state, const PhasePoint3& point, SParameter s,
                 const ThermalChannel& ch) {
  const Readout r = readout(s, NoiseModel{ch, std::nullopt});
  const Mode modes[3] = {Mode::A, Mode::B, Mode::C};
  const cplx pts[3] = {point.alpha, point.beta, point.gamma};
  return measured_quasiprobability(state, modes, pts, r);
}

double thermal_w1(cplx a, double nbar, SParameter s) {
  if (!(nbar >= 0.0)) throw DomainError("nbar must be >= 0");
  const double w = 2.0 * nbar + 1.0 - s.value();
  return 2.0 / (pi * w) * std::exp(-2.0 * std::norm(a) / w);
}

double convolution_check(const StateSpec& state, const PhasePoint3& point, SParameter s,
                         const ThermalChannel& ch, ConvolutionGrid grid) {
  ch.validate();
  const int n = grid.nodes_per_axis;
  if (n < 1) throw DomainError("convolution grid needs at least one node per axis");
  const double evals = std::pow(static_cast<double>(n), 6);
  if (evals > static_cast<double>(grid.max_evaluations))
    throw ResourceError("convolution grid of " + std::to_string(n) + "^6 nodes exceeds the evaluation budget");

  const double t2 = std::exp(-ch.gamma_tau);
  const double t = std::sqrt(t2);
  const double r = std::sqrt(-std::expm1(-ch.gamma_tau));

  // The thermal kernel is Gaussian with per-axis variance (2 nbar + 1 - s) / 4;
  // map the physicists' Hermite weight exp(-x^2) onto it.
  std::vector<double> x, w;
  gauss_hermite(n, x, w);
  const double sigma = std::sqrt((2.0 * ch.nbar + 1.0 - s.value()) / 4.0);
  const std::size_t nn = x.size();
  std::vector<double> node(nn), weight(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    node[i] = std::sqrt(2.0) * sigma * x[i];
    weight[i] = w[i] / std::sqrt(pi);
  }

  double total = 0.0;
  for (std::size_t a1 = 0; a1 < nn; ++a1)
    for (std::size_t a2 = 0; a2 < nn; ++a2) {
      const cplx da(node[a1], node[a2]);
      const double wa = weight[a1] * weight[a2];
      for (std::size_t b1 = 0; b1 < nn; ++b1)
        for (std::size_t b2 = 0; b2 < nn; ++b2) {
          const cplx db(node[b1], node[b2]);
          const double wb = wa * weight[b1] * weight[b2];
          for (std::size_t c1 = 0; c1 < nn; ++c1)
            for (std::size_t c2 = 0; c2 < nn; ++c2) {
              const cplx dc(node[c1], node[c2]);
              const PhasePoint3 shifted{(point.alpha - r * da) / t, (point.beta - r * db) / t,
                                        (point.gamma - r * dc) / t};
              total += wb * weight[c1] * weight[c2] * states::w3(state, shifted, s);
            }
        }
    }
  return total / (t2 * t2 * t2);
}

}  // namespace phasebell::noise
