#include "mrd/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mrd {

NelderMeadResult nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& start, double step, int max_evals, double tol) {
  const int n = static_cast<int>(start.size());
  NelderMeadResult out;
  out.x = start;
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return -f(x);  // minimize the negative
  };
  const double first = eval(start);
  out.value = -first;
  out.evaluations = evals;
  if (std::isinf(first) && first < 0) {
    out.converged = true;
    return out;
  }
  if (n == 0) {
    out.converged = true;
    return out;
  }

  // Gao-Han parameters scale with dimension.
  const double reflect = 1.0, expand = 1.0 + 2.0 / n, contract = 0.75 - 1.0 / (2.0 * n), shrink = 1.0 - 1.0 / n;

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), start);
  std::vector<double> vals(static_cast<std::size_t>(n + 1), first);
  for (int i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i + 1)](i) += step;
    vals[static_cast<std::size_t>(i + 1)] = eval(pts[static_cast<std::size_t>(i + 1)]);
  }
  std::vector<int> order(static_cast<std::size_t>(n + 1));

  auto finish = [&](bool converged) {
    const auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
    out.x = pts[static_cast<std::size_t>(best)];
    out.value = -vals[static_cast<std::size_t>(best)];
    out.evaluations = evals;
    out.converged = converged;
    return out;
  };

  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
    const auto ib = static_cast<std::size_t>(order.front());
    const auto iw = static_cast<std::size_t>(order.back());
    const auto is = static_cast<std::size_t>(order[static_cast<std::size_t>(n - 1)]);
    if (std::isinf(vals[ib]) && vals[ib] < 0) return finish(true);
    if (std::abs(vals[iw] - vals[ib]) <= tol * (1.0 + std::abs(vals[ib]))) return finish(true);

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (static_cast<std::size_t>(i) != iw) centroid += pts[static_cast<std::size_t>(i)];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + reflect * (centroid - pts[iw]);
    const double fr = eval(xr);
    if (fr < vals[ib]) {
      const Eigen::VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[iw] = xe;
        vals[iw] = fe;
      } else {
        pts[iw] = xr;
        vals[iw] = fr;
      }
      continue;
    }
    if (fr < vals[is]) {
      pts[iw] = xr;
      vals[iw] = fr;
      continue;
    }
    if (fr < vals[iw]) {
      const Eigen::VectorXd xc = centroid + contract * (xr - centroid);
      const double fc = eval(xc);
      if (fc <= fr) {
        pts[iw] = xc;
        vals[iw] = fc;
        continue;
      }
    } else {
      const Eigen::VectorXd xc = centroid - contract * (centroid - pts[iw]);
      const double fc = eval(xc);
      if (fc < vals[iw]) {
        pts[iw] = xc;
        vals[iw] = fc;
        continue;
      }
    }
    for (int i = 0; i <= n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (k == ib) continue;
      pts[k] = pts[ib] + shrink * (pts[k] - pts[ib]);
      vals[k] = eval(pts[k]);
    }
  }
  return finish(false);
}

ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol,
                             int max_iter) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  ScalarMax best{lo, f(lo)};
  const double fhi = f(hi);
  if (fhi > best.value) best = {hi, fhi};
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

ScalarMax grid_then_golden_max(const std::function<double(double)>& f, double lo, double hi, int points) {
  points = std::max(points, 2);
  const double h = (hi - lo) / (points - 1);
  ScalarMax best{lo, f(lo)};
  int best_i = 0;
  for (int i = 1; i < points; ++i) {
    const double x = (i == points - 1) ? hi : lo + i * h;
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  const double a = lo + std::max(0, best_i - 1) * h;
  const double b = std::min(hi, lo + (best_i + 1) * h);
  const ScalarMax refined = golden_section_max(f, a, b);
  return refined.value > best.value ? refined : best;
}

}  // namespace mrd
