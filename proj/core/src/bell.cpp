#include "phasebell/bell.hpp"

#include <cmath>
#include <numbers>

namespace phasebell::bell {
namespace {

using std::numbers::pi;

std::array<double, 3> readout_s(const noise::Readout& r) { return {r[0].s, r[1].s, r[2].s}; }

bool has(unsigned mask, int m) { return ((mask >> m) & 1U) != 0; }

// Settings as (party, which) -> point, for the combination sums below.
struct Grid {
  std::array<std::array<cplx, 2>, 3> p;
  explicit Grid(const MeasurementSettings& m)
      : p{{{m.alpha, m.alpha_p}, {m.beta, m.beta_p}, {m.gamma, m.gamma_p}}} {}
};

// Pattern of the MK combination: (setting of A, B, C) and its sign.
struct Term {
  int a, b, c;
  double sign;
};
constexpr std::array<Term, 4> kMk{{{0, 0, 1, 1.0}, {0, 1, 0, 1.0}, {1, 0, 0, 1.0}, {1, 1, 1, -1.0}}};

double d3(const BellEvaluator& ev, const Grid& g) {
  double sum = 0.0;
  for (const auto& t : kMk) sum += t.sign * ev.measured(7, {g.p[0][t.a], g.p[1][t.b], g.p[2][t.c]});
  return sum;
}

// Two-mode combination over parties (i, j): the MK pattern restricted to
// those two parties.
double d2(const BellEvaluator& ev, const Grid& g, int i, int j) {
  double sum = 0.0;
  for (const auto& t : kMk) {
    const int set[3] = {t.a, t.b, t.c};
    std::array<cplx, 3> pts{};
    pts[static_cast<std::size_t>(i)] = g.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(set[i])];
    pts[static_cast<std::size_t>(j)] = g.p[static_cast<std::size_t>(j)][static_cast<std::size_t>(set[j])];
    sum += t.sign * ev.measured((1U << i) | (1U << j), pts);
  }
  return sum;
}

double w1_unprimed(const BellEvaluator& ev, const Grid& g) {
  double sum = 0.0;
  for (int m = 0; m < 3; ++m) {
    std::array<cplx, 3> pts{};
    pts[static_cast<std::size_t>(m)] = g.p[static_cast<std::size_t>(m)][0];
    sum += ev.measured(1U << m, pts);
  }
  return sum;
}

}  // namespace

MeasurementSettings MeasurementSettings::from_reals(std::span<const double, 12> x) {
  return {{x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]}, {x[6], x[7]}, {x[8], x[9]}, {x[10], x[11]}};
}

std::array<double, 12> MeasurementSettings::to_reals() const {
  return {alpha.real(), alpha.imag(), alpha_p.real(), alpha_p.imag(), beta.real(),  beta.imag(),
          beta_p.real(), beta_p.imag(), gamma.real(), gamma.imag(), gamma_p.real(), gamma_p.imag()};
}

MeasurementSettings MeasurementSettings::swapped() const {
  return {alpha_p, alpha, beta_p, beta, gamma_p, gamma};
}

cplx MeasurementSettings::setting(Mode party, int which) const {
  switch (party) {
    case Mode::A: return which == 0 ? alpha : alpha_p;
    case Mode::B: return which == 0 ? beta : beta_p;
    default: return which == 0 ? gamma : gamma_p;
  }
}

bool MeasurementSettings::finite() const {
  for (double v : to_reals())
    if (!std::isfinite(v)) return false;
  return true;
}

BellEvaluator::BellEvaluator(const StateSpec& state, SParameter s, const noise::NoiseModel& noise)
    : prepared_(state, readout_s(noise::readout(s, noise))),
      readout_(noise::readout(s, noise)),
      s_(s),
      pi_scale_(pi * (1.0 - s.value()) / 2.0) {
  if (s.lower_branch()) {
    coef_pi_ = 2.0;
    coef_one_ = -1.0;
  } else {
    coef_pi_ = 1.0 - s.value();
    coef_one_ = s.value();
  }
}

double BellEvaluator::measured(unsigned mask, const std::array<cplx, 3>& points) const {
  double weight = 1.0;
  std::array<cplx, 3> scaled{};
  for (int m = 0; m < 3; ++m) {
    if (!has(mask, m)) continue;
    const auto& r = readout_[static_cast<std::size_t>(m)];
    weight *= r.weight;
    scaled[static_cast<std::size_t>(m)] = points[static_cast<std::size_t>(m)] / r.scale;
  }
  return weight * prepared_(mask, scaled);
}

double BellEvaluator::correlation(cplx a, cplx b, cplx c) const {
  const std::array<cplx, 3> pts{a, b, c};
  const double kp = coef_pi_ * pi_scale_;
  const double kp2 = kp * kp;
  const double k1 = coef_one_;
  const double k12 = k1 * k1;
  double sum = k12 * k1;
  for (unsigned mask = 1; mask < 8; ++mask) {
    const int n = static_cast<int>(has(mask, 0)) + static_cast<int>(has(mask, 1)) +
                  static_cast<int>(has(mask, 2));
    const double coef = n == 1 ? kp * k12 : n == 2 ? kp2 * k1 : kp2 * kp;
    sum += coef * measured(mask, pts);
  }
  return sum;
}

std::array<double, 8> BellEvaluator::correlators(const MeasurementSettings& m) const {
  const Grid g(m);
  std::array<double, 8> out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        out[static_cast<std::size_t>(4 * i + 2 * j + k)] = correlation(g.p[0][i], g.p[1][j], g.p[2][k]);
  return out;
}

BellResult BellEvaluator::evaluate(const MeasurementSettings& m) const {
  const auto c = correlators(m);
  BellResult r;
  r.mk = c[1] + c[2] + c[4] - c[7];
  r.mk_prime = c[6] + c[5] + c[3] - c[0];
  const double plus = std::abs(r.mk + r.mk_prime);
  const double minus = std::abs(r.mk - r.mk_prime);
  r.sign = minus > plus ? SignChoice::Minus : SignChoice::Plus;
  r.svetlichny = std::max(plus, minus);
  r.settings = m;
  r.s = s_;
  return r;
}

double correlation(const StateSpec& state, cplx a, cplx b, cplx c, SParameter s,
                   const noise::NoiseModel& noise) {
  return BellEvaluator(state, s, noise).correlation(a, b, c);
}

double mk_parameter(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                    const noise::NoiseModel& noise) {
  const BellEvaluator ev(state, s, noise);
  double sum = 0.0;
  for (const auto& t : kMk)
    sum += t.sign * ev.correlation(m.setting(Mode::A, t.a), m.setting(Mode::B, t.b),
                                   m.setting(Mode::C, t.c));
  return sum;
}

double mk_expansion(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                    const noise::NoiseModel& noise) {
  const BellEvaluator ev(state, s, noise);
  const Grid g(m);
  const double sv = s.value();
  const double w = 1.0 - sv;
  const double pairs = d2(ev, g, 0, 1) + d2(ev, g, 1, 2) + d2(ev, g, 2, 0);
  if (s.lower_branch())
    return pi * pi * pi * w * w * w * d3(ev, g) - pi * pi * w * w * pairs +
           2.0 * pi * w * w1_unprimed(ev, g) - 2.0;
  const double w2 = w * w;
  return pi * pi * pi * w2 * w2 * w2 / 8.0 * d3(ev, g) + pi * pi * w2 * w2 * sv / 4.0 * pairs +
         pi * w2 * sv * sv * w1_unprimed(ev, g) + 2.0 * sv * sv * sv;
}

double mk_prime(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                const noise::NoiseModel& noise) {
  return mk_parameter(state, m.swapped(), s, noise);
}

double svetlichny(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                  SignChoice sign, const noise::NoiseModel& noise) {
  const auto r = BellEvaluator(state, s, noise).evaluate(m);
  return std::abs(r.mk + sign_value(sign) * r.mk_prime);
}

BellResult evaluate(const StateSpec& state, const MeasurementSettings& m, SParameter s,
                    const noise::NoiseModel& noise) {
  return BellEvaluator(state, s, noise).evaluate(m);
}

double svetlichny_wigner(const StateSpec& state, const MeasurementSettings& m, SignChoice sign) {
  const BellEvaluator ev(state, SParameter(0.0));
  const double d = d3(ev, Grid(m));
  const double dp = d3(ev, Grid(m.swapped()));
  return std::abs(pi * pi * pi / 8.0 * (d + sign_value(sign) * dp));
}

double svetlichny_husimi(const StateSpec& state, const MeasurementSettings& m, SignChoice sign) {
  const BellEvaluator ev(state, SParameter(-1.0));
  const Grid g(m);
  const Grid gp(m.swapped());
  auto q2 = [&](int i, int wi, int j, int wj) {
    std::array<cplx, 3> pts{};
    pts[static_cast<std::size_t>(i)] = g.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(wi)];
    pts[static_cast<std::size_t>(j)] = g.p[static_cast<std::size_t>(j)][static_cast<std::size_t>(wj)];
    return ev.measured((1U << i) | (1U << j), pts);
  };
  auto q1 = [&](int i, int wi) {
    std::array<cplx, 3> pts{};
    pts[static_cast<std::size_t>(i)] = g.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(wi)];
    return ev.measured(1U << i, pts);
  };
  const double p3 = 8.0 * pi * pi * pi;
  const double p2 = 8.0 * pi * pi;
  const double p1 = 4.0 * pi;
  if (sign == SignChoice::Plus) {
    // Pairs with mixed settings survive; the constant -2 of each MK adds up.
    double cross = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      cross += q2(i, 0, j, 1) + q2(i, 1, j, 0);
    }
    double singles = 0.0;
    for (int i = 0; i < 3; ++i) singles += q1(i, 0) + q1(i, 1);
    return std::abs(p3 * (d3(ev, g) + d3(ev, gp)) - p2 * cross + p1 * singles - 4.0);
  }
  // Matching pairs survive and the constants cancel.
  double same = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    same += q2(i, 0, j, 0) - q2(i, 1, j, 1);
  }
  double singles = 0.0;
  for (int i = 0; i < 3; ++i) singles += q1(i, 0) - q1(i, 1);
  return std::abs(p3 * (d3(ev, g) - d3(ev, gp)) - p2 * same + p1 * singles);
}

}  // namespace phasebell::bell
