#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "chainrec/errors.hpp"
#include "chainrec/kernel.hpp"
#include "chainrec/state_space.hpp"
#include "doctest.h"
#include "test_models.hpp"

using namespace chainrec;
using namespace chainrec::testing;

namespace {

StochasticKernel drift_kernel() {
  return validate_kernel(StateSpace::indexed(2), {{0.2, 0.8}, {0.6, 0.4}});
}

// Three states, third absorbing, second splitting evenly between staying and
// falling into the first.
StochasticKernel absorbing_kernel() {
  return validate_kernel(StateSpace::indexed(3),
                         {{0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}});
}

}  // namespace

TEST_CASE("validate_kernel derives the support mask from the entries") {
  auto q = drift_kernel();
  CHECK(q.size() == 2);
  CHECK(q.prob(0, 1) == doctest::Approx(0.8));
  CHECK(q.supports(0, 0));
  CHECK(q.supports(1, 1));
  CHECK_FALSE(q.support_underflow());

  auto sparse = validate_kernel(StateSpace::indexed(2), {{0.0, 1.0}, {1.0, 0.0}});
  CHECK_FALSE(sparse.supports(0, 0));
  CHECK(sparse.supports(0, 1));
  CHECK(sparse.row_support(1).count() == 1);
}

TEST_CASE("validate_kernel rejects malformed input") {
  auto space = StateSpace::indexed(2);
  CHECK_THROWS_AS(validate_kernel(space, {{-0.1, 1.1}, {0.5, 0.5}}), NegativeEntry);
  CHECK_THROWS_AS(validate_kernel(space, {{0.3, 0.3}, {0.5, 0.5}}), NonStochasticRow);
  CHECK_THROWS_AS(validate_kernel(space, {{1.0}, {0.5, 0.5}}), DimensionMismatch);
  CHECK_THROWS_AS(validate_kernel(space, {{1.0, 0.0}}), DimensionMismatch);
}

TEST_CASE("row sums within the per-state tolerance are accepted") {
  auto space = StateSpace::indexed(2);
  double wobble = 1.5e-12;  // under kRowTolPerState * 2
  auto q = validate_kernel(space, {{0.5 + wobble, 0.5}, {0.0, 1.0}});
  CHECK(q.prob(0, 0) == doctest::Approx(0.5));
  double too_much = 1e-11;
  CHECK_THROWS_AS(validate_kernel(space, {{0.5 + too_much, 0.5}, {0.0, 1.0}}),
                  NonStochasticRow);
}

TEST_CASE("two-step and three-step compositions of the absorbing chain") {
  auto q = absorbing_kernel();

  auto q2 = compose(q, q);
  CHECK(q2.prob(1, 0) == doctest::Approx(0.25));
  CHECK(q2.prob(1, 1) == doctest::Approx(0.25));
  CHECK(q2.prob(1, 2) == doctest::Approx(0.5));
  CHECK(q2.prob(0, 2) == doctest::Approx(1.0));
  CHECK(q2.supports(1, 2));
  CHECK_FALSE(q2.supports(0, 0));

  auto q3 = kernel_power(q, 3);
  CHECK(q3.prob(1, 0) == doctest::Approx(0.125));
  CHECK(q3.prob(1, 1) == doctest::Approx(0.125));
  CHECK(q3.prob(1, 2) == doctest::Approx(0.75));

  auto q0 = kernel_power(q, 0);
  for (int i = 0; i < 3; ++i) {
    CHECK(q0.prob(i, i) == doctest::Approx(1.0));
    CHECK(q0.row_support(i).count() == 1);
  }
}

TEST_CASE("composition flags structural edges that underflow numerically") {
  // The only route from 0 to 0 in a.b is 0 -> 1 -> 0 with weight 1e-20,
  // below the support threshold of the composed kernel.
  auto space = StateSpace::indexed(3);
  auto a = validate_kernel(space, {{0.0, 1e-10, 1.0 - 1e-10},
                                   {0.0, 1.0, 0.0},
                                   {0.0, 0.0, 1.0}});
  auto b = validate_kernel(space, {{1.0, 0.0, 0.0},
                                   {1e-10, 0.0, 1.0 - 1e-10},
                                   {0.0, 0.0, 1.0}});
  CHECK(a.supports(0, 1));
  CHECK(b.supports(1, 0));

  auto ab = compose(a, b);
  CHECK(ab.prob(0, 0) == doctest::Approx(1e-20));
  CHECK_FALSE(ab.supports(0, 0));
  CHECK(ab.support_underflow());

  auto clean = compose(absorbing_kernel(), absorbing_kernel());
  CHECK_FALSE(clean.support_underflow());
}

TEST_CASE("composed support equals the boolean product when nothing underflows") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto a = random_kernel(6, 900 + seed);
    auto b = random_kernel(6, 1900 + seed);
    auto ab = compose(a, b);
    if (ab.support_underflow()) continue;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        bool structural = false;
        for (int k = 0; k < 6 && !structural; ++k)
          structural = a.supports(i, k) && b.supports(k, j);
        CHECK(ab.supports(i, j) == structural);
      }
  }
}

TEST_CASE("pushforward of the uniform measure through the drift chain") {
  auto q = drift_kernel();
  auto m = ReferenceMeasure::uniform(2);
  auto qm = pushforward(q, m);
  CHECK(qm.weight(0) == doctest::Approx(0.4));
  CHECK(qm.weight(1) == doctest::Approx(0.6));
  CHECK(qm.total() == doctest::Approx(1.0));
  CHECK(qm.mass(SupportSet::singleton(2, 0)) == doctest::Approx(0.4));
}

TEST_CASE("pullback is adjoint to pushforward") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = 2 + static_cast<int>(seed % 7);
    auto q = random_kernel(n, 4200 + seed);
    auto m = random_measure(n, 5200 + seed);
    Xoshiro256StarStar rng(6200 + seed);
    FunctionOnStates f;
    f.values.resize(n);
    for (auto& v : f.values) v = 2.0 * rng.uniform01() - 1.0;

    auto qm = pushforward(q, m);
    auto qf = pullback(q, f);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < n; ++i) {
      lhs += qf.values[i] * m.weight(i);
      rhs += f.values[i] * qm.weight(i);
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("pushforward preserves total mass") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int n = 2 + static_cast<int>(seed % 6);
    auto q = random_kernel(n, 7300 + seed);
    auto m = random_measure(n, 8300 + seed);
    auto qm = pushforward(q, m);
    CHECK(qm.total() == doctest::Approx(m.total()).epsilon(1e-12));
  }
}

TEST_CASE("generator exponential matches the closed form for two states") {
  auto g = validate_generator(StateSpace::indexed(2), {{-1.0, 1.0}, {1.0, -1.0}});
  double gamma = std::log(2.0);
  auto q = kernel_from_generator(g, gamma);
  // exp(gamma G) = [[(1+e^{-2 gamma})/2, (1-e^{-2 gamma})/2], ...]; at
  // gamma = ln 2 the off-diagonal entry is 3/8.
  CHECK(q.prob(0, 1) == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(q.prob(0, 0) == doctest::Approx(0.625).epsilon(1e-9));
  CHECK(q.prob(1, 0) == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(q.supports(0, 1));
  CHECK(q.supports(1, 1));
}

TEST_CASE("generator support is rate-graph reachability, not numeric size") {
  // 0 -> 1 -> 2 chain of rates.  At gamma = 1e-7 the two-jump probability is
  // around 5e-15, far below the numeric support threshold, yet 2 stays
  // reachable from 0.
  auto g = validate_generator(StateSpace::indexed(3), {{-1.0, 1.0, 0.0},
                                                       {0.0, -1.0, 1.0},
                                                       {0.0, 0.0, 0.0}});
  auto q = kernel_from_generator(g, 1e-7);
  CHECK(q.prob(0, 2) < kSupportEpsilon);
  CHECK(q.supports(0, 2));
  CHECK(q.supports(0, 0));
  CHECK_FALSE(q.supports(2, 0));
  CHECK(q.support_underflow());
}

TEST_CASE("generator validation and gamma guards") {
  auto space = StateSpace::indexed(2);
  CHECK_THROWS_AS(validate_generator(space, {{-1.0, 0.5}, {1.0, -1.0}}),
                  InvalidGenerator);
  CHECK_THROWS_AS(validate_generator(space, {{1.0, -1.0}, {1.0, -1.0}}),
                  InvalidGenerator);
  auto g = validate_generator(space, {{-1.0, 1.0}, {1.0, -1.0}});
  CHECK_THROWS_AS(kernel_from_generator(g, 0.0), InvalidGamma);
  CHECK_THROWS_AS(kernel_from_generator(g, -2.0), InvalidGamma);
  CHECK_THROWS_AS(kernel_from_generator(g, 1.0, 1e-3), Error);
}

TEST_CASE("generator rows of the exponential stay stochastic across scales") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = random_generator(5, 9100 + seed);
    for (double gamma : {0.1, 1.0, 10.0}) {
      auto q = kernel_from_generator(g, gamma);
      for (int i = 0; i < 5; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 5; ++j) {
          CHECK(q.prob(i, j) >= 0.0);
          sum += q.prob(i, j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(q.supports(i, i));
      }
    }
  }
}

TEST_CASE("schedules expose eventual periodicity through phase") {
  auto space = StateSpace::indexed(2);
  auto h = validate_kernel(space, {{1.0, 0.0}, {0.0, 1.0}});
  auto t0 = validate_kernel(space, {{0.0, 1.0}, {1.0, 0.0}});
  auto t1 = drift_kernel();
  KernelSchedule sched({h}, {t0, t1});

  CHECK_FALSE(sched.is_homogeneous());
  CHECK(sched.head_length() == 1);
  CHECK(sched.tail_period() == 2);
  CHECK(&sched.at(0) != nullptr);
  CHECK(sched.at(1).prob(0, 1) == doctest::Approx(1.0));
  CHECK(sched.at(2).prob(0, 1) == doctest::Approx(0.8));
  CHECK(sched.at(3).prob(0, 1) == doctest::Approx(1.0));
  CHECK(sched.phase(0) == 0);
  CHECK(sched.phase(1) == 1);
  CHECK(sched.phase(3) == 1);
  CHECK(sched.phase(4) == 2);

  auto homog = KernelSchedule::homogeneous(drift_kernel());
  CHECK(homog.is_homogeneous());
  CHECK(homog.phase(17) == 0);
}

TEST_CASE("schedule_step composes the kernels in driving order") {
  auto space = StateSpace::indexed(4);
  // First tail kernel rotates the transient states, the other two copy each
  // state one step toward the sink at 3.
  auto m0 = kernel_from_map(space, {3, 0, 1, 3});
  auto m1 = kernel_from_map(space, {3, 2, 1, 3});
  KernelSchedule sched({}, {m0, m1, m1});

  auto step = schedule_step(sched, 0, 3);
  // Frozen one-period composition: 0 -> 3, 1 -> 3, 2 -> 1, 3 -> 3.
  CHECK(step.prob(0, 3) == doctest::Approx(1.0));
  CHECK(step.prob(1, 3) == doctest::Approx(1.0));
  CHECK(step.prob(2, 1) == doctest::Approx(1.0));
  CHECK(step.prob(3, 3) == doctest::Approx(1.0));

  auto id = schedule_step(sched, 5, 0);
  CHECK(id.prob(2, 2) == doctest::Approx(1.0));

  // Composing from an offset start picks up the rotated order.
  auto shifted = schedule_step(sched, 1, 2);
  for (int i = 0; i < 4; ++i) {
    auto direct = compose(sched.at(1), sched.at(2));
    for (int j = 0; j < 4; ++j)
      CHECK(shifted.prob(i, j) == doctest::Approx(direct.prob(i, j)));
  }
}

TEST_CASE("kernel powers agree with repeated composition on random chains") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    int n = 2 + static_cast<int>(seed % 5);
    auto q = random_kernel(n, 11000 + seed);
    auto by_power = kernel_power(q, 4);
    auto by_steps = compose(compose(q, q), compose(q, q));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(by_power.prob(i, j) ==
              doctest::Approx(by_steps.prob(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("measures expose atoms, masses, and validation") {
  auto m = ReferenceMeasure::from_weights({0.0, 2.0, 0.0, 1.0});
  CHECK(m.total() == doctest::Approx(3.0));
  CHECK(m.atoms().count() == 2);
  CHECK(m.atoms().test(1));
  CHECK(m.atoms().test(3));
  CHECK(m.mass(SupportSet::from_indices(4, {0, 1})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ReferenceMeasure::from_weights({0.0, -1.0}), Error);
  CHECK_THROWS_AS(ReferenceMeasure::from_weights({0.0, 0.0}), Error);
}

TEST_CASE("grid spaces validate their cell structure") {
  std::vector<CellInterval> cells = {{0.0, 0.5, true, true},
                                     {0.5, 1.0, false, true}};
  auto space = StateSpace::grid({"left", "right"}, cells);
  CHECK(space->has_cells());
  CHECK(space->index_of("right") == 1);

  std::vector<CellInterval> gap = {{0.0, 0.4, true, true},
                                   {0.5, 1.0, false, true}};
  CHECK_THROWS_AS(StateSpace::grid({"a", "b"}, gap), Error);
  std::vector<CellInterval> overlap_owned = {{0.0, 0.5, true, true},
                                             {0.5, 1.0, true, true}};
  CHECK_THROWS_AS(StateSpace::grid({"a", "b"}, overlap_owned), Error);
}
