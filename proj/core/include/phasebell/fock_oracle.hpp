#pragma once

#include <functional>
#include <span>
#include <variant>

#include <Eigen/Dense>

#include "phasebell/types.hpp"

/// Truncated number-basis backend. Everything here is computed by brute
/// force (matrices and traces) and serves as ground truth for the
/// closed-form phase-space expressions.
namespace phasebell::fock {

/// Basis {|0>, ..., |n_max>} per mode.
class FockCutoff {
 public:
  explicit FockCutoff(int n_max);
  int n_max() const noexcept { return n_max_; }
  int dim() const noexcept { return n_max_ + 1; }

 private:
  int n_max_;
};

/// Default cutoff for a state family: 5 for the single-photon family,
/// max(20, ceil(z^2 + 7 z + 10)) for the ECS and, for the squeezed vacuum,
/// the larger of max(20, ceil(10 sinh^2 r + 15)) and ceil(30 / -ln tanh^2 r) + 8. build_state may still raise CutoffError if the
/// neglected population is too large.
FockCutoff default_cutoff(const StateSpec& spec);

class FockOperator {
 public:
  FockOperator(Eigen::MatrixXcd m, bool hermitian);

  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  bool hermitian() const noexcept { return hermitian_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Eigen::MatrixXcd m_;
  bool hermitian_;
};

/// Normalized state of one to three modes, each with the same cutoff.
/// Pure states keep only the amplitude vector; a three-mode density matrix
/// at a cutoff of 20 would already need more than a gigabyte.
class FockState {
 public:
  static FockState pure(int modes, int dim, Eigen::VectorXcd psi);
  static FockState mixed(int modes, int dim, Eigen::MatrixXcd rho);

  int modes() const noexcept { return modes_; }
  int dim() const noexcept { return dim_; }
  Eigen::Index total_dim() const noexcept;
  bool is_pure() const noexcept { return std::holds_alternative<Eigen::VectorXcd>(data_); }

  const Eigen::VectorXcd& amplitudes() const;  // pure states only
  Eigen::MatrixXcd density() const;
  double trace() const;

  /// Tr[rho (ops[0] x ops[1] x ...)], one operator per mode.
  cplx expectation(std::span<const FockOperator> ops) const;

  /// Population discarded by the truncation when the state was built.
  double neglected_population() const noexcept { return neglected_; }
  void set_neglected_population(double p) noexcept { neglected_ = p; }

 private:
  FockState(int modes, int dim, std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data);
  int modes_;
  int dim_;
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
  double neglected_ = 0.0;
};

/// Matrix of D(a) = exp(a a^dag - a^* a) restricted to the truncated basis,
/// built column by column from D|n+1> = (a^dag - a^*) D|n> / sqrt(n+1).
/// Every stored element equals the corresponding element of the untruncated
/// operator.
Eigen::MatrixXcd displacement_matrix(cplx a, FockCutoff cutoff);

/// Pi(a;s) = sum_n [(s+1)/(s-1)]^n |a,n><a,n|, restricted to the basis.
/// The sum over n runs over a padded internal basis so the block is the
/// exact restriction of the infinite-dimensional operator.
FockOperator pi_operator(cplx a, SParameter s, FockCutoff cutoff);

/// Same construction with arbitrary weights w_n on |a,n><a,n|.
FockOperator displaced_diagonal(cplx a, const std::function<double(int)>& weight,
                                FockCutoff cutoff);

/// Measurement operator: (1-s) Pi + s for -1 < s <= 0, 2 Pi - 1 for s <= -1.
FockOperator o_operator(cplx a, SParameter s, FockCutoff cutoff);

/// Pi(a;s) seen through a detector of efficiency eta: each displaced
/// number state |a,n> contributes sum_m C(n,m) eta^m (1-eta)^(n-m) [(s+1)/(s-1)]^m.
FockOperator lossy_pi_operator(cplx a, SParameter s, double eta, FockCutoff cutoff);

/// Outcome lambda_n of O(a;s) on the displaced number state |a,n>.
double eigenvalue_spectrum(SParameter s, int n);

FockState build_state(const StateSpec& spec, FockCutoff cutoff);
inline FockState build_state(const StateSpec& spec) { return build_state(spec, default_cutoff(spec)); }

/// Single-mode and product helpers used by the test suites.
FockState number_state(int n, FockCutoff cutoff);
FockState coherent_product(std::span<const cplx> amplitudes, FockCutoff cutoff);
Eigen::VectorXcd coherent_amplitudes(cplx a, int dim);

/// Tr[rho (A x B x C)] for a three-mode state, real part.
double correlator(const FockState& rho, const FockOperator& a, const FockOperator& b,
                  const FockOperator& c);

/// Trace over one mode.
FockState partial_trace(const FockState& rho, int mode);

/// (2 / (pi (1 - s)))^n Tr[rho Pi(x_1;s) x ... x Pi(x_n;s)] over all modes of rho.
double quasiprobability(const FockState& rho, std::span<const cplx> points, SParameter s);

/// Photon-number distribution of a single-mode state.
Eigen::VectorXd photon_distribution(const FockState& rho);

}  // namespace phasebell::fock
