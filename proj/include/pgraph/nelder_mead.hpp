#pragma once

// Nelder-Mead downhill simplex minimisation. Band functions are only
// piecewise analytic (eigenvalue crossings), so refinement avoids gradients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace pgraph {

struct NelderMeadOptions {
  double f_tolerance = 1e-10;  // stop when the simplex value spread falls below this
  int max_iterations = 500;    // per run
  int max_restarts = 2;        // re-seed a fresh simplex at the best point
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

template <class F>
NelderMeadResult nelder_mead_run(F& f, const std::vector<double>& start, double step, const NelderMeadOptions& opt) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  NelderMeadResult res;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (fx[worst] - fx[best] <= opt.f_tolerance) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[i][c];
    for (auto& c : centroid) c /= static_cast<double>(n);

    for (std::size_t c = 0; c < n; ++c) trial[c] = centroid[c] + kReflect * (centroid[c] - simplex[worst][c]);
    const double f_reflect = f(trial);

    if (f_reflect < fx[best]) {
      for (std::size_t c = 0; c < n; ++c) trial2[c] = centroid[c] + kExpand * (trial[c] - centroid[c]);
      const double f_expand = f(trial2);
      if (f_expand < f_reflect) {
        simplex[worst] = trial2;
        fx[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        fx[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < fx[second]) {
      simplex[worst] = trial;
      fx[worst] = f_reflect;
      continue;
    }

    const bool outside = f_reflect < fx[worst];
    for (std::size_t c = 0; c < n; ++c) {
      const double target = outside ? trial[c] : simplex[worst][c];
      trial2[c] = centroid[c] + kContract * (target - centroid[c]);
    }
    const double f_contract = f(trial2);
    if (f_contract < (outside ? f_reflect : fx[worst])) {
      simplex[worst] = trial2;
      fx[worst] = f_contract;
      continue;
    }

    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t c = 0; c < n; ++c) simplex[i][c] = simplex[best][c] + kShrink * (simplex[i][c] - simplex[best][c]);
      fx[i] = f(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  res.x = simplex[best];
  res.value = fx[best];
  res.iterations = it;
  return res;
}

}  // namespace detail

// Minimises f starting from `start`. After convergence the simplex is rebuilt
// around the best point with a smaller step, until a restart no longer
// improves by more than f_tolerance.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> start, const NelderMeadOptions& opt = {}) {
  if (start.empty()) {
    NelderMeadResult r;
    r.value = f(start);
    r.converged = true;
    return r;
  }
  double step = opt.initial_step;
  auto res = detail::nelder_mead_run(f, start, step, opt);
  int total = res.iterations;
  for (int r = 0; r < opt.max_restarts; ++r) {
    step = std::max(step * 1e-2, 1e-9);
    auto next = detail::nelder_mead_run(f, res.x, step, opt);
    total += next.iterations;
    const bool improved = next.value < res.value - opt.f_tolerance;
    if (next.value < res.value) res = std::move(next);
    if (!improved) break;
  }
  res.iterations = total;
  return res;
}

}  // namespace pgraph
