#include "phasebell/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace phasebell::opt {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& opts) {
  const std::size_t n = start.size();
  const double dn = static_cast<double>(n);
  const double rho = 1.0;
  const double chi = 1.0 + 2.0 / dn;
  const double psi = 0.75 - 1.0 / (2.0 * dn);
  const double sigma = 1.0 - 1.0 / dn;

  SimplexResult out;
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto along = [&](double t, std::vector<double>& dst, const std::vector<double>& worst) {
    for (std::size_t k = 0; k < n; ++k) dst[k] = centroid[k] + t * (centroid[k] - worst[k]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    // Stable ordering keeps the run deterministic when values tie.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    {
      std::vector<std::vector<double>> p2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        p2[i] = std::move(pts[order[i]]);
        v2[i] = vals[order[i]];
      }
      pts.swap(p2);
      vals.swap(v2);
    }

    double xspread = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) xspread = std::max(xspread, std::abs(pts[i][k] - pts[0][k]));
    if (std::abs(vals[n] - vals[0]) <= opts.f_tolerance && xspread <= opts.x_tolerance) {
      out.converged = true;
      break;
    }
    if (vals[n] - vals[0] <= opts.f_tolerance * 1e-3 && xspread <= 1e3 * opts.x_tolerance) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= opts.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / dn;

    along(rho, xr, pts[n]);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      along(rho * chi, xe, pts[n]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
      continue;
    }
    const bool outside = fr < vals[n];
    along(outside ? psi * rho : -psi, xc, pts[n]);
    const double fc = eval(xc);
    if (fc <= (outside ? fr : vals[n])) {
      pts[n] = xc;
      vals[n] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + sigma * (pts[i][k] - pts[0][k]);
      vals[i] = eval(pts[i]);
    }
  }
  out.x = pts[0];
  out.value = vals[0];
  return out;
}

}  // namespace phasebell::opt
