#include "aerobat/kinematics/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aerobat::kinematics {

namespace {

Eigen::VectorXd clamp_unit(Eigen::VectorXd x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start, const SimplexOptions& opt) {
  const int n = static_cast<int>(start.size());
  SimplexResult result;
  result.x = clamp_unit(start);
  result.value = f(result.x);
  result.evaluations = 1;

  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return f(x);
  };

  for (int round = 0; round <= opt.restarts; ++round) {
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), result.x);
    std::vector<double> vals(static_cast<std::size_t>(n + 1), result.value);
    const double step = opt.initial_step / (1 << round);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd p = result.x;
      p[i] += (p[i] + step <= 1.0) ? step : -step;
      pts[static_cast<std::size_t>(i + 1)] = p;
      vals[static_cast<std::size_t>(i + 1)] = eval(p);
    }

    std::vector<int> order(static_cast<std::size_t>(n + 1));
    bool converged = false;
    while (result.evaluations < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
      const auto best = static_cast<std::size_t>(order.front());
      const auto worst = static_cast<std::size_t>(order.back());
      const auto second = static_cast<std::size_t>(order[static_cast<std::size_t>(n - 1)]);

      if (vals[best] < result.value) {
        result.value = vals[best];
        result.x = pts[best];
      }
      ++result.iterations;
      result.history.push_back(result.value);

      double spread = 0.0;
      for (const auto& p : pts) spread = std::max(spread, (p - pts[best]).lpNorm<Eigen::Infinity>());
      if (std::abs(vals[worst] - vals[best]) <= opt.f_tolerance * (1.0 + std::abs(vals[best])) &&
          spread <= opt.x_tolerance * 1e3) {
        converged = true;
        break;
      }
      if (spread <= opt.x_tolerance) {
        converged = true;
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (i != worst) centroid += pts[i];
      centroid /= n;

      const Eigen::VectorXd xr = clamp_unit(centroid + (centroid - pts[worst]));
      const double fr = eval(xr);
      if (fr < vals[best]) {
        const Eigen::VectorXd xe = clamp_unit(centroid + 2.0 * (centroid - pts[worst]));
        const double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      const Eigen::VectorXd xc = outside ? clamp_unit(centroid + 0.5 * (xr - centroid))
                                         : clamp_unit(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      // Shrink towards the best vertex.
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i == best) continue;
        pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
        vals[i] = eval(pts[i]);
      }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (vals[i] < result.value) {
        result.value = vals[i];
        result.x = pts[i];
      }
    }
    result.history.push_back(result.value);
    result.converged = converged;
    if (result.evaluations >= opt.max_evaluations) break;
  }
  return result;
}

}  // namespace aerobat::kinematics
