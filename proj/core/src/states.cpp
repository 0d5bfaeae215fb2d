#include "phasebell/states.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>
#include <vector>

namespace phasebell::states {
namespace {

using std::numbers::pi;

// Every closed form below is written in terms of e = 2 / (1 - s), the
// width factor of the displaced-number-state weights: a coherent state
// |z> has <z|Pi(a;s)|z> = exp(-e |z - a|^2). A traced mode behaves like
// e = 0 (Pi replaced by the identity).
double width(double s) { return 2.0 / (1.0 - s); }

bool has(unsigned mask, int m) { return ((mask >> m) & 1U) != 0; }

int popcount(unsigned mask) {
  return static_cast<int>(has(mask, 0)) + static_cast<int>(has(mask, 1)) +
         static_cast<int>(has(mask, 2));
}

double single_photon(const std::array<double, 3>& c, const std::array<double, 3>& s, unsigned mask,
                     const std::array<cplx, 3>& pts) {
  double weight = 1.0;
  double prefactor = 1.0;
  double envelope = 0.0;
  cplx coherent{0.0, 0.0};
  for (int m = 0; m < 3; ++m) {
    if (!has(mask, m)) continue;
    const auto k = static_cast<std::size_t>(m);
    const double e = width(s[k]);
    weight -= c[k] * c[k] * e;
    coherent += c[k] * e * pts[k];
    prefactor *= e / pi;
    envelope -= e * std::norm(pts[k]);
  }
  return prefactor * std::exp(envelope) * (weight + std::norm(coherent));
}

double ghz_ecs(double zeta, const std::array<double, 3>& s, unsigned mask,
               const std::array<cplx, 3>& pts) {
  const double nrm = ecs_normalization(zeta);
  const double z2 = zeta * zeta;
  double prefactor = nrm * nrm;
  double plus = 0.0;
  double minus = 0.0;
  double cross = -2.0 * z2 * (3 - popcount(mask));  // <-z|z> = exp(-2 z^2) per traced mode
  double phase = 0.0;
  for (int m = 0; m < 3; ++m) {
    if (!has(mask, m)) continue;
    const auto k = static_cast<std::size_t>(m);
    const double e = width(s[k]);
    prefactor *= e / pi;
    plus -= e * std::norm(pts[k] + zeta);
    minus -= e * std::norm(pts[k] - zeta);
    cross += -(2.0 - e) * z2 - e * std::norm(pts[k]);
    phase += 2.0 * zeta * e * pts[k].imag();
  }
  return prefactor * (std::exp(plus) + std::exp(minus) - 2.0 * std::exp(cross) * std::cos(phase));
}

void check_s(double s) {
  if (!(s <= 0.0) || !std::isfinite(s)) throw DomainError("s must be finite and <= 0");
}

}  // namespace

std::array<double, 3> single_photon_amplitudes(double p) {
  const double side = std::sqrt(0.5 * (1.0 - p / 3.0));
  return {std::sqrt(p / 3.0), side, side};
}

double ecs_normalization(double zeta) {
  if (!(zeta > 0.0)) throw DomainError("ECS normalization diverges at zeta = 0");
  return 1.0 / std::sqrt(-2.0 * std::expm1(-6.0 * zeta * zeta));
}

PreparedState::PreparedState(const StateSpec& state, const std::array<double, 3>& s_per_mode)
    : state_(state), s_(s_per_mode) {
  for (double s : s_) check_s(s);
  if (const auto* w = std::get_if<SinglePhotonW>(&state_.family()))
    amplitudes_ = single_photon_amplitudes(w->p);
  const auto* sq = std::get_if<SqueezedVacuum3>(&state_.family());
  if (sq == nullptr) return;

  const double r = sq->r;
  msv::Mat6 cov = msv::wigner_covariance(r);
  for (int m = 0; m < 3; ++m) {
    cov(2 * m, 2 * m) -= s_[static_cast<std::size_t>(m)] / 4.0;
    cov(2 * m + 1, 2 * m + 1) -= s_[static_cast<std::size_t>(m)] / 4.0;
  }
  const Eigen::MatrixXd full = cov.inverse();
  const bool uniform = s_[0] == s_[1] && s_[1] == s_[2];
  for (unsigned mask = 1; mask < 8; ++mask) {
    auto& g = gaussian_[mask];
    g.dims = 2 * popcount(mask);
    g.precision.setZero();
    if (mask == 7 && uniform) {
      // Joint form at a common s, taken verbatim from the closed form.
      g.precision = msv::precision(r, s_[0]);
      g.norm = msv::prefactor(r, s_[0]);
      continue;
    }
    std::vector<int> kept;
    for (int m = 0; m < 3; ++m)
      if (has(mask, m)) {
        kept.push_back(2 * m);
        kept.push_back(2 * m + 1);
      }
    const Eigen::MatrixXd pm = msv::schur_marginal(full, kept);
    g.precision.topLeftCorner(g.dims, g.dims) = pm;
    g.norm = std::sqrt(pm.determinant()) / std::pow(2.0 * pi, g.dims / 2);
  }
}

double PreparedState::operator()(unsigned mask, const std::array<cplx, 3>& pts) const {
  mask &= 7U;
  if (mask == 0) return 1.0;
  return state_.visit([&](const auto& f) -> double {
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, SinglePhotonW>) {
      return single_photon(amplitudes_, s_, mask, pts);
    } else if constexpr (std::is_same_v<T, GhzEcs>) {
      return ghz_ecs(f.zeta, s_, mask, pts);
    } else {
      const auto& g = gaussian_[mask];
      double x[6];
      int n = 0;
      for (int m = 0; m < 3; ++m) {
        if (!has(mask, m)) continue;
        x[n++] = pts[static_cast<std::size_t>(m)].real();
        x[n++] = pts[static_cast<std::size_t>(m)].imag();
      }
      double q = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += g.precision(i, j) * x[j];
        q += x[i] * row;
      }
      return g.norm * std::exp(-0.5 * q);
    }
  });
}

double quasiprobability(const StateSpec& state, std::span<const ModeProbe> probes) {
  if (probes.size() > 3) throw DimensionError("at most three modes per query");
  std::array<double, 3> s{0.0, 0.0, 0.0};
  std::array<cplx, 3> pts{};
  unsigned mask = 0;
  for (const auto& p : probes) {
    const int m = index(p.mode);
    if (m < 0 || m > 2) throw DimensionError("invalid mode");
    if (has(mask, m)) throw DimensionError("duplicate mode in quasiprobability query");
    if (!std::isfinite(p.point.real()) || !std::isfinite(p.point.imag()))
      throw DomainError("phase-space point must be finite");
    check_s(p.s);
    mask |= 1U << m;
    s[static_cast<std::size_t>(m)] = p.s;
    pts[static_cast<std::size_t>(m)] = p.point;
  }
  // Traced modes take the s of a kept mode so a uniform query stays uniform.
  if (!probes.empty())
    for (int m = 0; m < 3; ++m)
      if (!has(mask, m)) s[static_cast<std::size_t>(m)] = probes.front().s;
  return PreparedState(state, s)(mask, pts);
}

double w3(const StateSpec& state, const PhasePoint3& point, SParameter s) {
  const ModeProbe probes[3] = {{Mode::A, point.alpha, s.value()},
                               {Mode::B, point.beta, s.value()},
                               {Mode::C, point.gamma, s.value()}};
  return quasiprobability(state, probes);
}

double w2_marginal(const StateSpec& state, std::pair<Mode, Mode> modes, cplx a, cplx b,
                   SParameter s) {
  if (modes.first == modes.second) throw DimensionError("w2_marginal needs two distinct modes");
  const ModeProbe probes[2] = {{modes.first, a, s.value()}, {modes.second, b, s.value()}};
  return quasiprobability(state, probes);
}

double w1_marginal(const StateSpec& state, Mode mode, cplx a, SParameter s) {
  const ModeProbe probe[1] = {{mode, a, s.value()}};
  return quasiprobability(state, probe);
}

namespace msv {

Mat6 precision(double r, double s) {
  const double c = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  const double d = 1.0 + s * s - 2.0 * s * c;
  // Exponent = (2 / 3D) [3 (s - cosh 2r) |x|^2 + sinh 2r (Q_im - Q_re)],
  // Q(v) = sum v_j^2 - 4 sum_{j<k} v_j v_k. P = -2 * (quadratic coefficients).
  const double k = 2.0 / (3.0 * d);
  Mat6 p = Mat6::Zero();
  for (int j = 0; j < 3; ++j) {
    p(2 * j, 2 * j) = -2.0 * k * (3.0 * (s - c) - sh);
    p(2 * j + 1, 2 * j + 1) = -2.0 * k * (3.0 * (s - c) + sh);
    for (int l = 0; l < 3; ++l) {
      if (l == j) continue;
      p(2 * j, 2 * l) = -2.0 * k * (2.0 * sh);
      p(2 * j + 1, 2 * l + 1) = -2.0 * k * (-2.0 * sh);
    }
  }
  return p;
}

double prefactor(double r, double s) {
  const double d = 1.0 + s * s - 2.0 * s * std::cosh(2.0 * r);
  return 8.0 / (pi * pi * pi * std::pow(d, 1.5));
}

Mat6 wigner_covariance(double r) { return precision(r, 0.0).inverse(); }

Eigen::MatrixXd schur_marginal(const Eigen::MatrixXd& p, std::span<const int> kept) {
  const auto n = static_cast<int>(p.rows());
  std::vector<int> dropped;
  for (int i = 0; i < n; ++i) {
    bool keep = false;
    for (int k : kept) keep = keep || k == i;
    if (!keep) dropped.push_back(i);
  }
  const auto nk = static_cast<Eigen::Index>(kept.size());
  const auto nd = static_cast<Eigen::Index>(dropped.size());
  Eigen::MatrixXd pkk(nk, nk), pkd(nk, nd), pdd(nd, nd);
  for (Eigen::Index i = 0; i < nk; ++i) {
    for (Eigen::Index j = 0; j < nk; ++j) pkk(i, j) = p(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
    for (Eigen::Index j = 0; j < nd; ++j) pkd(i, j) = p(kept[static_cast<std::size_t>(i)], dropped[static_cast<std::size_t>(j)]);
  }
  for (Eigen::Index i = 0; i < nd; ++i)
    for (Eigen::Index j = 0; j < nd; ++j) pdd(i, j) = p(dropped[static_cast<std::size_t>(i)], dropped[static_cast<std::size_t>(j)]);
  if (nd == 0) return pkk;
  return pkk - pkd * pdd.ldlt().solve(pkd.transpose());
}

}  // namespace msv

}  // namespace phasebell::states
