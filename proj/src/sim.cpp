#include "chainrec/sim.hpp"

#include <cmath>

#include "chainrec/errors.hpp"
#include "chainrec/rng.hpp"

namespace chainrec {

namespace {

int sample_row(const StochasticKernel& q, int i, Xoshiro256StarStar& rng) {
    const double u = rng.uniform01();
    double cdf = 0.0;
    int chosen = -1;
    for (int j = 0; j < q.size(); ++j) {
        const double p = q.prob(i, j);
        if (p == 0.0) continue;
        cdf += p;
        chosen = j;
        if (u < cdf) break;
    }
    if (chosen < 0) throw Error("kernel row has no positive entry");
    if (!q.supports(i, chosen))
        throw Error("sampled transition " + std::to_string(i) + " -> " +
                    std::to_string(chosen) + " lies outside the support mask");
    return chosen;
}

void check_state(const KernelSchedule& schedule, int x) {
    if (x < 0 || x >= schedule.size()) throw Error("state index out of range");
}

} // namespace

PathSample sample_path(const KernelSchedule& schedule, int x0, long horizon,
                       std::uint64_t seed) {
    check_state(schedule, x0);
    if (horizon < 0) throw Error("horizon must be nonnegative");
    Xoshiro256StarStar rng(seed);
    PathSample path;
    path.start = x0;
    path.seed = seed;
    path.states.reserve(horizon + 1);
    path.states.push_back(x0);
    int x = x0;
    for (long t = 0; t < horizon; ++t) {
        x = sample_row(schedule.at(t), x, rng);
        path.states.push_back(x);
    }
    return path;
}

double exact_return_prob(const KernelSchedule& schedule, int x, const SupportSet& a,
                         long t_max) {
    check_state(schedule, x);
    if (a.space_size() != schedule.size())
        throw DimensionMismatch("set does not match schedule space");
    if (t_max < 1) throw Error("horizon must be at least 1");
    const int n = schedule.size();
    std::vector<double> p(n, 0.0);
    p[x] = 1.0;
    double absorbed = 0.0;
    std::vector<double> next(n);
    for (long t = 0; t < t_max; ++t) {
        const StochasticKernel& q = schedule.at(t);
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            if (p[i] == 0.0) continue;
            for (int j = 0; j < n; ++j) next[j] += p[i] * q.prob(i, j);
        }
        for (int j = 0; j < n; ++j) {
            if (a.test(j)) {
                absorbed += next[j];
                next[j] = 0.0;
            }
        }
        p.swap(next);
    }
    return absorbed;
}

namespace {

/// 95% Wilson score interval; z is the two-sided normal quantile.
void wilson_interval(long hits, long trials, double* lo, double* hi) {
    constexpr double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = phat + z2 / (2.0 * nt);
    const double spread = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt));
    *lo = (center - spread) / denom;
    *hi = (center + spread) / denom;
}

} // namespace

ReturnProbEstimate estimate_return_prob(const KernelSchedule& schedule, int x,
                                        const SupportSet& a, long t_max, long trials,
                                        std::uint64_t seed) {
    check_state(schedule, x);
    if (a.space_size() != schedule.size())
        throw DimensionMismatch("set does not match schedule space");
    if (t_max < 1) throw Error("horizon must be at least 1");
    if (trials < 1) throw Error("need at least one trial");

    long hits = 0;
    for (long trial = 0; trial < trials; ++trial) {
        Xoshiro256StarStar rng(substream_seed(seed, trial));
        int state = x;
        for (long t = 0; t < t_max; ++t) {
            state = sample_row(schedule.at(t), state, rng);
            if (a.test(state)) {
                ++hits;
                break;
            }
        }
    }
    ReturnProbEstimate e;
    e.trials = trials;
    e.hits = hits;
    e.estimate = static_cast<double>(hits) / trials;
    wilson_interval(hits, trials, &e.wilson_lo, &e.wilson_hi);
    return e;
}

CoverageReport empirical_vs_exact(const KernelSchedule& schedule,
                                  const std::vector<std::tuple<int, SupportSet, long>>& pairs,
                                  long trials, std::uint64_t seed) {
    CoverageReport report;
    report.cases.reserve(pairs.size());
    for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
        const auto& [x, a, t_max] = pairs[idx];
        CoverageCase c{x, a, t_max, 0.0, {}, false};
        c.exact = exact_return_prob(schedule, x, a, t_max);
        c.estimate = estimate_return_prob(schedule, x, a, t_max, trials,
                                          substream_seed(seed, idx));
        c.covered = c.exact >= c.estimate.wilson_lo && c.exact <= c.estimate.wilson_hi;
        if (c.covered) ++report.covered;
        report.cases.push_back(std::move(c));
    }
    report.fraction =
        pairs.empty() ? 1.0 : static_cast<double>(report.covered) / pairs.size();
    return report;
}

} // namespace chainrec
