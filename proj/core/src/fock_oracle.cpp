#include "phasebell/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace phasebell::fock {
namespace {

using std::numbers::pi;

constexpr double kMaxNeglected = 1e-8;

Eigen::Index ipow(int base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// out[l, i, r] = sum_j m(i, j) v[l, j, r], where the mode index i sits at
// stride `right` and `left` blocks precede it.
Eigen::VectorXcd apply_local(const Eigen::MatrixXcd& m, int mode, int modes, int dim,
                             const Eigen::VectorXcd& v) {
  const Eigen::Index left = ipow(dim, mode);
  const Eigen::Index right = ipow(dim, modes - mode - 1);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (Eigen::Index l = 0; l < left; ++l) {
    const Eigen::Index base = l * dim * right;
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        const cplx mij = m(i, j);
        if (mij == cplx{0.0, 0.0}) continue;
        const Eigen::Index src = base + j * right;
        const Eigen::Index dst = base + i * right;
        for (Eigen::Index r = 0; r < right; ++r) out(dst + r) += mij * v(src + r);
      }
    }
  }
  return out;
}

double kappa(double s) { return (s + 1.0) / (s - 1.0); }

// Internal basis size used when summing |a,n><a,n| so that the retained
// block is converged: D_{mk} decays like |a|^(k-m) / sqrt(k!/m!).
int padded_dim(cplx a, FockCutoff cutoff) {
  const double r = std::abs(a);
  return cutoff.dim() + 40 + static_cast<int>(std::ceil(r * r + 10.0 * r));
}

Eigen::MatrixXcd displacement_columns(cplx a, int dim) {
  Eigen::MatrixXcd d(dim, dim);
  d.col(0) = coherent_amplitudes(a, dim);
  const cplx ac = std::conj(a);
  for (int n = 0; n + 1 < dim; ++n) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n + 1));
    d(0, n + 1) = -ac * d(0, n) * inv;
    for (int m = 1; m < dim; ++m)
      d(m, n + 1) = (std::sqrt(static_cast<double>(m)) * d(m - 1, n) - ac * d(m, n)) * inv;
  }
  return d;
}

FockState finish(int modes, int dim, Eigen::VectorXcd psi, double expected_norm2) {
  const double kept = psi.squaredNorm();
  const double neglected = std::max(0.0, 1.0 - kept / expected_norm2);
  if (neglected > kMaxNeglected)
    throw CutoffError("Fock cutoff too small: neglected population " + std::to_string(neglected));
  psi /= std::sqrt(kept);
  FockState st = FockState::pure(modes, dim, std::move(psi));
  st.set_neglected_population(neglected);
  return st;
}

FockState build_single_photon(double p, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const auto c = [p] {
    const double side = std::sqrt(0.5 * (1.0 - p / 3.0));
    return std::array<double, 3>{std::sqrt(p / 3.0), side, side};
  }();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ipow(d, 3));
  psi(1 * d * d) = c[0];  // |100>
  psi(1 * d) = c[1];      // |010>
  psi(1) = c[2];          // |001>
  return finish(3, d, std::move(psi), 1.0);
}

FockState build_ecs(double zeta, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const Eigen::VectorXcd plus = coherent_amplitudes(zeta, d);
  const Eigen::VectorXcd minus = coherent_amplitudes(-zeta, d);
  Eigen::VectorXcd psi(ipow(d, 3));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        psi((i * d + j) * d + k) = plus(i) * plus(j) * plus(k) - minus(i) * minus(j) * minus(k);
  // Untruncated norm^2 of |zzz> - |-z-z-z> is 2 - 2 exp(-6 z^2).
  return finish(3, d, std::move(psi), -2.0 * std::expm1(-6.0 * zeta * zeta));
}

// Three single-mode squeezed vacua on a balanced tritter. The symmetric
// input (which exits as (a+b+c)/sqrt3) carries squeezing phase pi, the two
// others phase 0. A product of squeezed vacua is exp(1/2 sum_k g_k a_k^dag^2)|0>
// with g_k = -e^{i theta_k} tanh r; the tritter a_k^dag -> sum_j U_jk b_j^dag
// turns this into exp(1/2 b^dag^T G b^dag)|0> with G = U diag(g) U^T. Fock
// amplitudes follow from b_k psi = sum_j G_kj b_j^dag psi.
FockState build_squeezed(double r, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const double t = std::tanh(r);
  Eigen::Matrix3d u;
  const double s3 = 1.0 / std::sqrt(3.0), s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
  u << s3, s2, s6,
       s3, -s2, s6,
       s3, 0.0, -2.0 * s6;
  const Eigen::Vector3d g(t, -t, -t);
  const Eigen::Matrix3d kernel = u * g.asDiagonal() * u.transpose();

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ipow(d, 3));
  auto at = [d](int i, int j, int k) { return static_cast<Eigen::Index>((i * d + j) * d + k); };
  psi(0) = 1.0;
  for (int total = 1; total <= 3 * (d - 1); ++total) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const int k = total - i - j;
        if (k < 0 || k >= d) continue;
        std::array<int, 3> m{i, j, k};
        // Lower the first occupied mode q: sqrt(m_q) c(m) = sum_l G_ql sqrt(n_l) c(n - e_l), n = m - e_q.
        int q = 0;
        while (m[static_cast<std::size_t>(q)] == 0) ++q;
        std::array<int, 3> n = m;
        n[static_cast<std::size_t>(q)] -= 1;
        cplx acc{0.0, 0.0};
        for (int l = 0; l < 3; ++l) {
          const int nl = n[static_cast<std::size_t>(l)];
          if (nl == 0) continue;
          std::array<int, 3> src = n;
          src[static_cast<std::size_t>(l)] -= 1;
          acc += kernel(q, l) * std::sqrt(static_cast<double>(nl)) * psi(at(src[0], src[1], src[2]));
        }
        psi(at(i, j, k)) = acc / std::sqrt(static_cast<double>(m[static_cast<std::size_t>(q)]));
      }
    }
  }
  // Each squeezed vacuum contributes 1/sqrt(cosh r) to the vacuum amplitude.
  const double c = std::cosh(r);
  psi /= std::pow(c, 1.5);
  return finish(3, d, std::move(psi), 1.0);
}

}  // namespace

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw DomainError("Fock cutoff n_max must be >= 1");
}

FockCutoff default_cutoff(const StateSpec& spec) {
  return spec.visit([](const auto& f) -> FockCutoff {
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, SinglePhotonW>) {
      return FockCutoff(5);
    } else if constexpr (std::is_same_v<T, GhzEcs>) {
      const double z = f.zeta;
      return FockCutoff(std::max(20, static_cast<int>(std::ceil(z * z + 7.0 * z + 10.0))));
    } else {
      const double sh = std::sinh(f.r);
      int n = std::max(20, static_cast<int>(std::ceil(10.0 * sh * sh + 15.0)));
      // Per-mode populations fall off like tanh(r)^(2n) times a polynomial;
      // the sinh^2 rule alone leaves tails near 1e-6 once r approaches 1.
      if (f.r > 0.0) {
        const double decay = -std::log(std::pow(std::tanh(f.r), 2));
        n = std::max(n, static_cast<int>(std::ceil(30.0 / decay)) + 8);
      }
      return FockCutoff(n);
    }
  });
}

FockOperator::FockOperator(Eigen::MatrixXcd m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {
  if (m_.rows() != m_.cols()) throw DimensionError("Fock operator must be square");
  if (hermitian_ && (m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("operator flagged hermitian is not");
}

FockState::FockState(int modes, int dim, std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data)
    : modes_(modes), dim_(dim), data_(std::move(data)) {
  if (modes < 1 || modes > 3) throw DimensionError("FockState supports one to three modes");
  if (dim < 2) throw DimensionError("FockState needs at least two levels per mode");
}

FockState FockState::pure(int modes, int dim, Eigen::VectorXcd psi) {
  if (psi.size() != ipow(dim, modes)) throw DimensionError("amplitude vector has wrong size");
  return FockState(modes, dim, std::move(psi));
}

FockState FockState::mixed(int modes, int dim, Eigen::MatrixXcd rho) {
  const Eigen::Index n = ipow(dim, modes);
  if (rho.rows() != n || rho.cols() != n) throw DimensionError("density matrix has wrong size");
  return FockState(modes, dim, std::move(rho));
}

Eigen::Index FockState::total_dim() const noexcept { return ipow(dim_, modes_); }

const Eigen::VectorXcd& FockState::amplitudes() const {
  if (!is_pure()) throw DimensionError("state is mixed");
  return std::get<Eigen::VectorXcd>(data_);
}

Eigen::MatrixXcd FockState::density() const {
  if (is_pure()) {
    const auto& v = std::get<Eigen::VectorXcd>(data_);
    return v * v.adjoint();
  }
  return std::get<Eigen::MatrixXcd>(data_);
}

double FockState::trace() const {
  if (is_pure()) return std::get<Eigen::VectorXcd>(data_).squaredNorm();
  return std::get<Eigen::MatrixXcd>(data_).trace().real();
}

cplx FockState::expectation(std::span<const FockOperator> ops) const {
  if (static_cast<int>(ops.size()) != modes_) throw DimensionError("need one operator per mode");
  for (const auto& op : ops)
    if (op.dim() != dim_) throw DimensionError("operator dimension does not match the state cutoff");
  if (is_pure()) {
    const auto& psi = std::get<Eigen::VectorXcd>(data_);
    Eigen::VectorXcd v = psi;
    for (int m = 0; m < modes_; ++m) v = apply_local(ops[static_cast<std::size_t>(m)].matrix(), m, modes_, dim_, v);
    return psi.dot(v);
  }
  const auto& rho = std::get<Eigen::MatrixXcd>(data_);
  cplx tr{0.0, 0.0};
  for (Eigen::Index col = 0; col < rho.cols(); ++col) {
    Eigen::VectorXcd v = rho.col(col);
    for (int m = 0; m < modes_; ++m) v = apply_local(ops[static_cast<std::size_t>(m)].matrix(), m, modes_, dim_, v);
    tr += v(col);
  }
  return tr;
}

Eigen::VectorXcd coherent_amplitudes(cplx a, int dim) {
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * a / std::sqrt(static_cast<double>(n));
  return c;
}

Eigen::MatrixXcd displacement_matrix(cplx a, FockCutoff cutoff) {
  return displacement_columns(a, cutoff.dim());
}

FockOperator displaced_diagonal(cplx a, const std::function<double(int)>& weight, FockCutoff cutoff) {
  const int big = padded_dim(a, cutoff);
  const int d = cutoff.dim();
  const Eigen::MatrixXcd dm = displacement_columns(a, big);
  const Eigen::MatrixXcd top = dm.topRows(d);
  Eigen::VectorXd w(big);
  for (int n = 0; n < big; ++n) w(n) = weight(n);
  Eigen::MatrixXcd m = top * w.asDiagonal() * top.adjoint();
  // Symmetrize away rounding so the hermitian flag holds exactly.
  m = 0.5 * (m + m.adjoint()).eval();
  return FockOperator(std::move(m), true);
}

FockOperator pi_operator(cplx a, SParameter s, FockCutoff cutoff) {
  const double k = kappa(s.value());
  return displaced_diagonal(a, [k](int n) { return std::pow(k, n); }, cutoff);
}

FockOperator o_operator(cplx a, SParameter s, FockCutoff cutoff) {
  const FockOperator pi_op = pi_operator(a, s, cutoff);
  const auto id = Eigen::MatrixXcd::Identity(cutoff.dim(), cutoff.dim());
  const double sv = s.value();
  if (s.lower_branch()) return FockOperator(2.0 * pi_op.matrix() - id, true);
  return FockOperator((1.0 - sv) * pi_op.matrix() + sv * id, true);
}

FockOperator lossy_pi_operator(cplx a, SParameter s, double eta, FockCutoff cutoff) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("detection efficiency must lie in (0, 1]");
  const double k = kappa(s.value());
  auto weight = [k, eta](int n) {
    // sum_m C(n,m) eta^m (1-eta)^(n-m) k^m, summed term by term.
    double total = 0.0;
    double binom = 1.0;
    for (int m = 0; m <= n; ++m) {
      if (m > 0) binom *= static_cast<double>(n - m + 1) / m;
      total += binom * std::pow(eta, m) * std::pow(1.0 - eta, n - m) * std::pow(k, m);
    }
    return total;
  };
  return displaced_diagonal(a, weight, cutoff);
}

double eigenvalue_spectrum(SParameter s, int n) {
  if (n < 0) throw DomainError("photon number must be >= 0");
  const double sv = s.value();
  const double kn = std::pow(kappa(sv), n);
  if (s.lower_branch()) return 2.0 * kn - 1.0;
  return (1.0 - sv) * kn + sv;
}

FockState build_state(const StateSpec& spec, FockCutoff cutoff) {
  return spec.visit([&](const auto& f) -> FockState {
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, SinglePhotonW>) return build_single_photon(f.p, cutoff);
    else if constexpr (std::is_same_v<T, GhzEcs>) return build_ecs(f.zeta, cutoff);
    else return build_squeezed(f.r, cutoff);
  });
}

FockState number_state(int n, FockCutoff cutoff) {
  if (n < 0 || n > cutoff.n_max()) throw DimensionError("number state outside the basis");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff.dim());
  v(n) = 1.0;
  return FockState::pure(1, cutoff.dim(), std::move(v));
}

FockState coherent_product(std::span<const cplx> amplitudes, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const int modes = static_cast<int>(amplitudes.size());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (cplx a : amplitudes) {
    const Eigen::VectorXcd c = coherent_amplitudes(a, d);
    Eigen::VectorXcd next(psi.size() * d);
    for (Eigen::Index i = 0; i < psi.size(); ++i)
      for (int j = 0; j < d; ++j) next(i * d + j) = psi(i) * c(j);
    psi = std::move(next);
  }
  return finish(modes, d, std::move(psi), 1.0);
}

double correlator(const FockState& rho, const FockOperator& a, const FockOperator& b,
                  const FockOperator& c) {
  if (rho.modes() != 3) throw DimensionError("correlator needs a three-mode state");
  const FockOperator ops[3] = {a, b, c};
  return rho.expectation(ops).real();
}

FockState partial_trace(const FockState& rho, int mode) {
  if (mode < 0 || mode >= rho.modes()) throw DimensionError("invalid mode index for partial trace");
  if (rho.modes() == 1) throw DimensionError("cannot trace out the only mode");
  const int d = rho.dim();
  const int modes = rho.modes();
  const Eigen::Index left = ipow(d, mode);
  const Eigen::Index right = ipow(d, modes - mode - 1);
  const Eigen::Index nr = left * right;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nr, nr);
  auto full = [&](Eigen::Index l, Eigen::Index i, Eigen::Index r) { return (l * d + i) * right + r; };
  if (rho.is_pure()) {
    const auto& psi = rho.amplitudes();
    for (Eigen::Index i = 0; i < d; ++i) {
      Eigen::VectorXcd slice(nr);
      for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index r = 0; r < right; ++r) slice(l * right + r) = psi(full(l, i, r));
      out.noalias() += slice * slice.adjoint();
    }
  } else {
    const Eigen::MatrixXcd m = rho.density();
    for (Eigen::Index a = 0; a < nr; ++a) {
      const Eigen::Index la = a / right, ra = a % right;
      for (Eigen::Index b = 0; b < nr; ++b) {
        const Eigen::Index lb = b / right, rb = b % right;
        cplx acc{0.0, 0.0};
        for (Eigen::Index i = 0; i < d; ++i) acc += m(full(la, i, ra), full(lb, i, rb));
        out(a, b) = acc;
      }
    }
  }
  return FockState::mixed(modes - 1, d, std::move(out));
}

double quasiprobability(const FockState& rho, std::span<const cplx> points, SParameter s) {
  if (static_cast<int>(points.size()) != rho.modes()) throw DimensionError("need one point per mode");
  const FockCutoff cutoff(rho.dim() - 1);
  std::vector<FockOperator> ops;
  ops.reserve(points.size());
  for (cplx p : points) ops.push_back(pi_operator(p, s, cutoff));
  const double scale = std::pow(2.0 / (pi * (1.0 - s.value())), static_cast<double>(points.size()));
  return scale * rho.expectation(ops).real();
}

Eigen::VectorXd photon_distribution(const FockState& rho) {
  if (rho.modes() != 1) throw DimensionError("photon distribution needs a single-mode state");
  return rho.density().diagonal().real();
}

}  // namespace phasebell::fock
