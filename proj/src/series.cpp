#include "chainrec/series.hpp"

#include <algorithm>

#include "chainrec/errors.hpp"
#include "chainrec/scc.hpp"
#include "chainrec/set_dynamics.hpp"

namespace chainrec {

namespace {

void require_positive_mass(const ReferenceMeasure& m, const SupportSet& a) {
    if (!a.intersects(m.atoms()))
        throw EmptySetError("set has zero reference mass");
}

// The set sequence n |-> Q^-n(A) is eventually periodic; a nonnegative
// series with eventually periodic terms diverges iff some term inside the
// cycle is positive.  Sampling one full period starting at max(preperiod, 1)
// sees every cycle term with n >= 1.
bool cycle_has_positive_term(const SetTrace& trace, const SupportSet& a,
                             const SupportSet& atoms, long* found_n) {
    const long start = std::max<long>(trace.preperiod(), 1);
    for (long n = start; n < start + trace.period(); ++n) {
        SupportSet hit = trace.at(n);
        hit &= a;
        if (hit.intersects(atoms)) {
            if (found_n) *found_n = n;
            return true;
        }
    }
    return false;
}

DivergenceVerdict set_series(const StochasticKernel& q, const ReferenceMeasure& m,
                             const SupportSet& a, SeriesKind kind) {
    require_positive_mass(m, a);
    const SetTrace trace = preimage_trace(q, a);
    const SupportSet atoms = m.atoms();

    DivergenceVerdict v;
    v.kind = kind;
    v.trace_preperiod = trace.preperiod();
    v.trace_period = trace.period();
    long found_n = 0;
    v.diverges = cycle_has_positive_term(trace, a, atoms, &found_n);
    v.witness = v.diverges
                    ? "cycle term at n = " + std::to_string(found_n) + " has positive mass"
                    : "every term inside the trace cycle has zero mass";

    const long first = kind == SeriesKind::ForwardReturn ? 0 : 1;
    const long count = trace.horizon() + 16;
    double sum = 0.0;
    v.partial_sums.reserve(count);
    for (long n = first; n < first + count; ++n) {
        SupportSet hit = trace.at(n);
        hit &= a;
        sum += m.mass(hit);
        v.partial_sums.push_back(sum);
    }
    return v;
}

bool set_series_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                         const SupportSet& a) {
    require_positive_mass(m, a);
    const SetTrace trace = preimage_trace(q, a);
    return cycle_has_positive_term(trace, a, m.atoms(), nullptr);
}

// States in closed communicating classes reachable (in zero or more steps)
// from the support of m.  See docs/divergence.md for why the pushforward
// series diverges exactly when a meets this set.
SupportSet absorbing_states_seen_from(const StochasticKernel& q, const ReferenceMeasure& m) {
    const SccDecomposition d = scc_decomposition(q);
    const int c = static_cast<int>(d.classes.size());
    SupportSet reachable_classes(c);
    for (int x : m.atoms().indices()) reachable_classes |= d.class_reach[d.class_of[x]];
    SupportSet out(q.size());
    for (int ci : reachable_classes.indices())
        if (d.classes[ci].closed) out |= d.classes[ci].members;
    return out;
}

} // namespace

DivergenceVerdict series_main(const StochasticKernel& q, const ReferenceMeasure& m,
                              const SupportSet& a) {
    return set_series(q, m, a, SeriesKind::PreimageReturn);
}

DivergenceVerdict series_forward(const StochasticKernel& q, const ReferenceMeasure& m,
                                 const SupportSet& a) {
    return set_series(q, m, a, SeriesKind::ForwardReturn);
}

DivergenceVerdict series_pushforward(const StochasticKernel& q, const ReferenceMeasure& m,
                                     const SupportSet& a) {
    if (a.space_size() != q.size()) throw DimensionMismatch("set does not match kernel space");
    DivergenceVerdict v;
    v.kind = SeriesKind::PushforwardMass;
    const SupportSet absorbing = absorbing_states_seen_from(q, m);
    SupportSet hit = absorbing;
    hit &= a;
    v.diverges = hit.any();
    v.witness = v.diverges ? "set meets the closed class through states " + hit.to_string()
                           : "no closed communicating class reachable from supp(m) meets the set";

    // Partial sums are informative only; the decision above is structural.
    const long n_cap = v.diverges ? 4 * q.size() + 64 : 4096;
    ReferenceMeasure mu = m;
    double sum = 0.0;
    for (long n = 1; n <= n_cap; ++n) {
        mu = pushforward(q, mu);
        const double term = mu.mass(a);
        sum += term;
        v.partial_sums.push_back(sum);
        if (!v.diverges && term <= 1e-15 * std::max(1.0, sum)) break;
    }
    return v;
}

bool series_main_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                          const SupportSet& a) {
    return set_series_diverges(q, m, a);
}

bool series_forward_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                             const SupportSet& a) {
    // The extra n = 0 term is finite, so the decision matches the n >= 1 sum.
    return set_series_diverges(q, m, a);
}

bool series_pushforward_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                                 const SupportSet& a) {
    if (a.space_size() != q.size()) throw DimensionMismatch("set does not match kernel space");
    SupportSet hit = absorbing_states_seen_from(q, m);
    hit &= a;
    return hit.any();
}

} // namespace chainrec
