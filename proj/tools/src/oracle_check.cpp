#include <cmath>
#include <random>

#include "phasebell/cli/run.hpp"
#include "phasebell/fock_oracle.hpp"

namespace phasebell::cli {

double OracleSample::abs_error() const { return std::abs(closed_form - oracle); }

double oracle_tolerance(const StateSpec& state) {
  return std::holds_alternative<SqueezedVacuum3>(state.family()) ? 1e-6 : 1e-8;
}

std::vector<OracleSample> oracle_check(const StateSpec& state, int samples, std::uint64_t seed) {
  const fock::FockState rho = fock::build_state(state);
  const fock::FockCutoff cutoff(rho.dim() - 1);
  // Two-mode states with mode k traced out, and the single modes.
  const fock::FockState pair[3] = {fock::partial_trace(rho, 0), fock::partial_trace(rho, 1),
                                   fock::partial_trace(rho, 2)};
  const fock::FockState single[3] = {fock::partial_trace(pair[2], 1), fock::partial_trace(pair[2], 0),
                                     fock::partial_trace(pair[0], 0)};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> s_dist(-2.5, 0.0);
  std::normal_distribution<double> g(0.0, 0.7);
  std::uniform_int_distribution<int> mode_dist(0, 2);
  auto point = [&] { return cplx(g(rng), g(rng)); };

  std::vector<OracleSample> out;
  for (int k = 0; k < samples; ++k) {
    const SParameter s(s_dist(rng));
    const cplx p[3] = {point(), point(), point()};

    out.push_back({"w3", k, states::w3(state, {p[0], p[1], p[2]}, s), fock::quasiprobability(rho, p, s)});

    const int dropped = mode_dist(rng);
    const int m0 = dropped == 0 ? 1 : 0;
    const int m1 = dropped == 2 ? 1 : 2;
    const cplx pp[2] = {p[m0], p[m1]};
    out.push_back({"w2", k,
                   states::w2_marginal(state, {mode_from_index(m0), mode_from_index(m1)}, pp[0], pp[1], s),
                   fock::quasiprobability(pair[dropped], pp, s)});

    const int kept = mode_dist(rng);
    const cplx p1[1] = {p[kept]};
    out.push_back({"w1", k, states::w1_marginal(state, mode_from_index(kept), p1[0], s),
                   fock::quasiprobability(single[kept], p1, s)});

    const auto oa = fock::o_operator(p[0], s, cutoff);
    const auto ob = fock::o_operator(p[1], s, cutoff);
    const auto oc = fock::o_operator(p[2], s, cutoff);
    out.push_back({"correlation", k, bell::correlation(state, p[0], p[1], p[2], s),
                   fock::correlator(rho, oa, ob, oc)});

    const bell::MeasurementSettings m{p[0], point(), p[1], point(), p[2], point()};
    double mk_oracle = 0.0;
    const int pattern[4][3] = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}};
    for (int t = 0; t < 4; ++t) {
      const double sign = t == 3 ? -1.0 : 1.0;
      mk_oracle += sign * fock::correlator(rho, fock::o_operator(m.setting(Mode::A, pattern[t][0]), s, cutoff),
                                           fock::o_operator(m.setting(Mode::B, pattern[t][1]), s, cutoff),
                                           fock::o_operator(m.setting(Mode::C, pattern[t][2]), s, cutoff));
    }
    out.push_back({"mk", k, bell::mk_expansion(state, m, s), mk_oracle});
  }
  return out;
}

}  // namespace phasebell::cli
