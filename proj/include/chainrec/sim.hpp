#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// Realized trajectory: states[t] is the state at time t, states[0] = start.
struct PathSample {
    int start = 0;
    std::uint64_t seed = 0;
    std::vector<int> states;
};

/// Deterministic in (schedule, x0, horizon, seed).  Rows are sampled by
/// inverse CDF with a strict u < cdf comparison, so entries of probability
/// zero are never selected, and every sampled transition is checked against
/// the support mask.
PathSample sample_path(const KernelSchedule& schedule, int x0, long horizon,
                       std::uint64_t seed);

/// Probability that a chain started at x (time 0) visits a at some time in
/// [1, t_max], computed exactly by absorbing the entering mass step by step.
double exact_return_prob(const KernelSchedule& schedule, int x, const SupportSet& a,
                         long t_max);

struct ReturnProbEstimate {
    double estimate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 1.0;
    long trials = 0;
    long hits = 0;
};

/// Monte Carlo counterpart of exact_return_prob with a 95% Wilson score
/// interval.  Each trial runs on its own substream of seed, so results do
/// not depend on scheduling order.
ReturnProbEstimate estimate_return_prob(const KernelSchedule& schedule, int x,
                                        const SupportSet& a, long t_max, long trials,
                                        std::uint64_t seed);

struct CoverageCase {
    int x = 0;
    SupportSet a;
    long t_max = 0;
    double exact = 0.0;
    ReturnProbEstimate estimate;
    bool covered = false;  // exact value inside the Wilson interval
};

struct CoverageReport {
    std::vector<CoverageCase> cases;
    long covered = 0;
    double fraction = 0.0;
};

/// Runs estimate vs exact for each (state, set, horizon) triple and reports
/// how often the interval covers the exact value.
CoverageReport empirical_vs_exact(const KernelSchedule& schedule,
                                  const std::vector<std::tuple<int, SupportSet, long>>& pairs,
                                  long trials, std::uint64_t seed);

} // namespace chainrec
