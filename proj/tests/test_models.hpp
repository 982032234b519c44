// Shared random model builders for the unit suites.  Everything here is
// deterministic in the seed so failures reproduce from the logged value.
#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/rng.hpp"
#include "chainrec/state_space.hpp"

namespace chainrec::testing {

// Dense kernel with roughly `fill` support density.  Every row keeps at
// least one entry so the result is stochastic.
inline StochasticKernel random_kernel(int n, std::uint64_t seed,
                                      double fill = 0.5) {
  Xoshiro256StarStar rng(seed);
  std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform01() < fill) {
        double w = 0.05 + rng.uniform01();
        probs[static_cast<std::size_t>(i) * n + j] = w;
        row_sum += w;
      }
    }
    if (row_sum == 0.0) {
      int j = static_cast<int>(rng.below(n));
      probs[static_cast<std::size_t>(i) * n + j] = 1.0;
      row_sum = 1.0;
    }
    for (int j = 0; j < n; ++j)
      probs[static_cast<std::size_t>(i) * n + j] /= row_sum;
  }
  return validate_kernel_flat(StateSpace::indexed(n), std::move(probs));
}

// Deterministic kernel (one unit entry per row): the transition-map view.
inline StochasticKernel random_map_kernel(int n, std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  std::vector<int> to(n);
  for (auto& t : to) t = static_cast<int>(rng.below(n));
  return kernel_from_map(StateSpace::indexed(n), to);
}

// Doubly stochastic kernel built as a convex mix of random permutation
// matrices.  Rows and columns both sum to one by construction.
inline StochasticKernel random_doubly_stochastic(int n, std::uint64_t seed,
                                                 int terms = 4) {
  Xoshiro256StarStar rng(seed);
  std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> weights(terms);
  double total = 0.0;
  for (auto& w : weights) {
    w = 0.1 + rng.uniform01();
    total += w;
  }
  std::vector<int> perm(n);
  for (int t = 0; t < terms; ++t) {
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n; i > 1; --i) {
      int j = static_cast<int>(rng.below(i));
      std::swap(perm[i - 1], perm[j]);
    }
    double w = weights[t] / total;
    for (int i = 0; i < n; ++i)
      probs[static_cast<std::size_t>(i) * n + perm[i]] += w;
  }
  return validate_kernel_flat(StateSpace::indexed(n), std::move(probs));
}

// Random measure; with probability `null_share` per state the weight is
// zero, so null atoms appear in the tests that need them.  Always keeps at
// least one positive weight.
inline ReferenceMeasure random_measure(int n, std::uint64_t seed,
                                       double null_share = 0.3) {
  Xoshiro256StarStar rng(seed);
  std::vector<double> w(n, 0.0);
  for (auto& x : w)
    if (rng.uniform01() >= null_share) x = 0.05 + rng.uniform01();
  bool any = std::any_of(w.begin(), w.end(), [](double v) { return v > 0; });
  if (!any) w[rng.below(n)] = 1.0;
  return ReferenceMeasure::from_weights(std::move(w));
}

// Random conservative generator: off-diagonal rates in [0, 2), diagonal set
// to minus the row sum.  `fill` controls sparsity.
inline GeneratorMatrix random_generator(int n, std::uint64_t seed,
                                        double fill = 0.5) {
  Xoshiro256StarStar rng(seed);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (rng.uniform01() < fill) {
        double r = 2.0 * rng.uniform01();
        rows[i][j] = r;
        row += r;
      }
    }
    rows[i][i] = -row;
  }
  return validate_generator(StateSpace::indexed(n), rows);
}

// Random subset of an n-state space, never empty.
inline SupportSet random_subset(int n, Xoshiro256StarStar& rng) {
  SupportSet s(n);
  for (int i = 0; i < n; ++i)
    if (rng.uniform01() < 0.5) s.set(i);
  if (s.none()) s.set(static_cast<int>(rng.below(n)));
  return s;
}

}  // namespace chainrec::testing
