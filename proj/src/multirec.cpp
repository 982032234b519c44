#include "chainrec/multirec.hpp"

#include "chainrec/errors.hpp"
#include "chainrec/set_dynamics.hpp"

namespace chainrec {

namespace {

void check_args(const StochasticKernel& q, const ReferenceMeasure& m, const SupportSet& a,
                int k) {
    if (a.space_size() != q.size() || m.size() != q.size())
        throw DimensionMismatch("operands live on different spaces");
    if (k < 1) throw Error("intersection depth k must be at least 1");
    if (!a.intersects(m.atoms())) throw EmptySetError("set has zero reference mass");
}

} // namespace

MultiRecResult multiple_return_probe(const StochasticKernel& q, const ReferenceMeasure& m,
                                     const SupportSet& a, int k, std::optional<long> n_max) {
    check_args(q, m, a, k);
    const SetTrace trace = preimage_trace(q, a);

    // Beyond the preperiod, Q^-jn(a) depends on jn only through its position
    // in the cycle, so n and n + period give identical intersections once
    // n > preperiod: searching n <= horizon is exhaustive.
    const long decisive = trace.horizon();
    long bound = decisive;
    if (n_max) {
        if (*n_max < 1) throw Error("n_max must be at least 1");
        bound = std::min(bound, *n_max);
    }

    MultiRecResult r;
    r.k = k;
    r.searched_bound = bound;
    r.exhaustive = bound == decisive;
    for (long n = 1; n <= bound; ++n) {
        SupportSet common = a;
        for (int j = 1; j < k && common.any(); ++j) common &= trace.at(j * n);
        const double mass = m.mass(common);
        if (mass > 0.0) {
            r.found_n = n;
            r.mass = mass;
            return r;
        }
    }
    return r;
}

MultiRecResult multiple_return_oracle(const StochasticKernel& q, const ReferenceMeasure& m,
                                      const SupportSet& a, int k, long n_limit) {
    check_args(q, m, a, k);
    if (n_limit < 1) throw Error("n_limit must be at least 1");

    MultiRecResult r;
    r.k = k;
    r.searched_bound = n_limit;
    r.exhaustive = false;
    for (long n = 1; n <= n_limit; ++n) {
        SupportSet common = a;
        SupportSet pulled = a;
        for (int j = 1; j < k && common.any(); ++j) {
            for (long step = 0; step < n; ++step) pulled = preimage(q, pulled);
            common &= pulled;
        }
        const double mass = m.mass(common);
        if (mass > 0.0) {
            r.found_n = n;
            r.mass = mass;
            return r;
        }
    }
    return r;
}

} // namespace chainrec
