#include "chainrec/recurrence.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "chainrec/errors.hpp"
#include "chainrec/scc.hpp"
#include "chainrec/series.hpp"
#include "chainrec/set_dynamics.hpp"

namespace chainrec {

namespace {

double null_mass_threshold(const ReferenceMeasure& m) {
    return kFullMeasureRelTol * m.total();
}

/// Applies `ok` to every nonempty subset and returns the first violator.
std::optional<SupportSet> first_subset_violation(
    int n, const std::function<bool(const SupportSet&)>& ok) {
    if (n > kMaxExhaustiveStates)
        throw FamilyTooLarge("cannot enumerate subsets of " + std::to_string(n) + " states");
    const std::uint64_t limit = 1ULL << n;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        SupportSet a = SupportSet::from_bits(n, mask);
        if (!ok(a)) return a;
    }
    return std::nullopt;
}

/// Fallback family for spaces too large to enumerate: singletons, the
/// communicating classes, their forward closures, one-step images and
/// preimages of all of those, the atoms of m, and X itself.
std::vector<SupportSet> structured_family(const StochasticKernel& q, const ReferenceMeasure& m) {
    const int n = q.size();
    const SccDecomposition d = scc_decomposition(q);
    std::vector<SupportSet> base;
    for (int i = 0; i < n; ++i) base.push_back(SupportSet::singleton(n, i));
    for (const auto& cls : d.classes) base.push_back(cls.members);
    for (std::size_t c = 0; c < d.classes.size(); ++c) {
        SupportSet closure(n);
        for (int target : d.class_reach[c].indices()) closure |= d.classes[target].members;
        base.push_back(closure);
    }
    base.push_back(m.atoms());
    base.push_back(SupportSet::full(n));

    std::vector<SupportSet> family;
    std::unordered_set<SupportSet, SupportSetHash> seen;
    auto add = [&](const SupportSet& s) {
        if (s.any() && seen.insert(s).second) family.push_back(s);
    };
    for (const auto& s : base) {
        add(s);
        add(image(q, s));
        add(preimage(q, s));
    }
    return family;
}

struct QuantifiedCheck {
    std::string property;
    // ok(a) decides the property for one set; sets of zero mass are skipped.
    std::function<bool(const SupportSet&)> ok;
};

PropertyVerdict run_over_family(const StochasticKernel& q, const ReferenceMeasure& m,
                                const SetFamily& family, const QuantifiedCheck& check) {
    PropertyVerdict v;
    v.property = check.property;
    const SupportSet atoms = m.atoms();
    auto ok_or_skip = [&](const SupportSet& a) {
        if (!a.intersects(atoms)) return true;
        return check.ok(a);
    };
    long checked = 0;
    if (family.exhaustive() && q.size() <= kMaxExhaustiveStates) {
        auto witness = first_subset_violation(q.size(), [&](const SupportSet& a) {
            ++checked;
            return ok_or_skip(a);
        });
        v.holds = !witness.has_value();
        v.witness = witness;
    } else {
        const std::vector<SupportSet> sets =
            family.exhaustive() ? structured_family(q, m) : family.sets();
        v.family_restricted = family.exhaustive();
        v.holds = true;
        for (const auto& a : sets) {
            ++checked;
            if (!ok_or_skip(a)) {
                v.holds = false;
                v.witness = a;
                break;
            }
        }
    }
    v.detail = (v.holds ? "no violation among " : "violated; checked ") +
               std::to_string(checked) + " sets" +
               (v.family_restricted ? " (structured family only)" : "");
    if (v.witness) v.detail += ", witness " + v.witness->to_string();
    return v;
}

} // namespace

SupportSet poincare_recurrent_set(const StochasticKernel& q, const SupportSet& a) {
    if (a.space_size() != q.size()) throw DimensionMismatch("set does not match kernel space");
    const SetTrace trace = preimage_trace(q, a);
    SupportSet returning(q.size());
    for (long t = 1; t <= trace.horizon(); ++t) returning |= trace.at(t);
    returning &= a;
    return returning;
}

SupportSet strong_recurrent_set(const StochasticKernel& q, const SupportSet& a) {
    if (a.space_size() != q.size()) throw DimensionMismatch("set does not match kernel space");
    const int n = q.size();
    // One step of "certainly inside": states whose entire support row lands
    // in s.  C_t then collects the states that are in a with probability one
    // after exactly t steps.
    auto certainly_inside = [&](const SupportSet& s) {
        SupportSet out(n);
        for (int i = 0; i < n; ++i)
            if (s.contains(q.row_support(i))) out.set(i);
        return out;
    };
    const SetTrace trace = iterate_trace(certainly_inside, a);
    SupportSet sure(n);
    for (long t = 1; t <= trace.horizon(); ++t) sure |= trace.at(t);
    sure &= a;
    return sure;
}

RecurrenceReport recurrence_report(const StochasticKernel& q, const ReferenceMeasure& m,
                                   const SupportSet& a) {
    RecurrenceReport r{a, poincare_recurrent_set(q, a), a, strong_recurrent_set(q, a), 0.0};
    r.nonrecurrent = a.set_minus(r.recurrent);
    r.nonrecurrent_mass = m.mass(r.nonrecurrent);
    return r;
}

SupportSet topologically_recurrent_points(const StochasticKernel& q) {
    const std::vector<SupportSet> reach = reach_one_or_more(q);
    SupportSet out(q.size());
    for (int x = 0; x < q.size(); ++x)
        if (reach[x].test(x)) out.set(x);
    return out;
}

SupportSet metrically_recurrent_points(const StochasticKernel& q, const ReferenceMeasure& m) {
    if (m.size() != q.size()) throw DimensionMismatch("measure does not match kernel space");
    const std::vector<SupportSet> reach = reach_one_or_more(q);
    const SupportSet atoms = m.atoms();
    SupportSet out(q.size());
    for (int x = 0; x < q.size(); ++x)
        if (reach[x].test(x) || reach[x].contains(atoms)) out.set(x);
    return out;
}

std::vector<SupportSet> enumerate_subsets(int n) {
    if (n > kMaxExhaustiveStates)
        throw FamilyTooLarge("cannot enumerate subsets of " + std::to_string(n) + " states");
    std::vector<SupportSet> out;
    out.reserve((1ULL << n) - 1);
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask)
        out.push_back(SupportSet::from_bits(n, mask));
    return out;
}

PropertyVerdict prp_check(const StochasticKernel& q, const ReferenceMeasure& m,
                          const SetFamily& family) {
    const std::vector<SupportSet> reach = reach_one_or_more(q);
    const double tol = null_mass_threshold(m);
    QuantifiedCheck check{
        "poincare-recurrence",
        [&, tol](const SupportSet& a) {
            double stranded = 0.0;
            for (int x : a.indices())
                if (!reach[x].intersects(a)) stranded += m.weight(x);
            return stranded <= tol;
        }};
    return run_over_family(q, m, family, check);
}

PropertyVerdict return_series_check(const StochasticKernel& q, const ReferenceMeasure& m) {
    QuantifiedCheck check{"return-series", [&](const SupportSet& a) {
                              return series_main_diverges(q, m, a);
                          }};
    return run_over_family(q, m, SetFamily::all_subsets(), check);
}

PropertyVerdict forward_series_check(const StochasticKernel& q, const ReferenceMeasure& m) {
    QuantifiedCheck check{"forward-return-series", [&](const SupportSet& a) {
                              return series_forward_diverges(q, m, a);
                          }};
    return run_over_family(q, m, SetFamily::all_subsets(), check);
}

PropertyVerdict pushforward_series_check(const StochasticKernel& q, const ReferenceMeasure& m) {
    QuantifiedCheck check{"pushforward-series", [&](const SupportSet& a) {
                              return series_pushforward_diverges(q, m, a);
                          }};
    return run_over_family(q, m, SetFamily::all_subsets(), check);
}

PropertyVerdict cons_forward_check(const StochasticKernel& q, const ReferenceMeasure& m) {
    const double tol = null_mass_threshold(m);
    QuantifiedCheck check{"forward-conservativity", [&, tol](const SupportSet& a) {
                              SupportSet img = image(q, a);
                              if (!a.contains(img)) return true;
                              return m.mass(a.set_minus(img)) <= tol;
                          }};
    return run_over_family(q, m, SetFamily::all_subsets(), check);
}

PropertyVerdict cons_backward_check(const StochasticKernel& q, const ReferenceMeasure& m) {
    const double tol = null_mass_threshold(m);
    QuantifiedCheck check{"backward-conservativity", [&, tol](const SupportSet& a) {
                              SupportSet pre = preimage(q, a);
                              if (!a.contains(pre)) return true;
                              return m.mass(a.set_minus(pre)) <= tol;
                          }};
    return run_over_family(q, m, SetFamily::all_subsets(), check);
}

TheoremReport verify_recurrence_equivalence(const StochasticKernel& q,
                                            const ReferenceMeasure& m) {
    TheoremReport r;
    r.theorem = "recurrence-equivalence";
    PropertyVerdict series = return_series_check(q, m);
    PropertyVerdict prp = prp_check(q, m);
    r.holds = series.holds == prp.holds;
    r.detail = "return series " + std::string(series.holds ? "divergent" : "convergent") +
               " for all positive-mass sets; recurrence property " +
               std::string(prp.holds ? "holds" : "fails");
    if (!r.holds) r.detail += "; the two sides disagree";
    if (series.family_restricted || prp.family_restricted)
        r.detail += " (structured family only)";
    r.parts = {std::move(series), std::move(prp)};
    return r;
}

TheoremReport verify_pointwise_recurrence(const StochasticKernel& q,
                                          const ReferenceMeasure& m) {
    TheoremReport r;
    r.theorem = "pointwise-recurrence";
    PropertyVerdict premise = return_series_check(q, m);
    const double tol = null_mass_threshold(m);

    PropertyVerdict topological;
    topological.property = "topological-recurrence-ae";
    SupportSet top_bad = topologically_recurrent_points(q).complement();
    double top_mass = m.mass(top_bad);
    topological.holds = top_mass <= tol;
    if (!topological.holds) topological.witness = top_bad;
    topological.detail = "non-recurrent mass " + std::to_string(top_mass);

    PropertyVerdict metrical;
    metrical.property = "metric-recurrence-ae";
    SupportSet met_bad = metrically_recurrent_points(q, m).complement();
    double met_mass = m.mass(met_bad);
    metrical.holds = met_mass <= tol;
    if (!metrical.holds) metrical.witness = met_bad;
    metrical.detail = "non-recurrent mass " + std::to_string(met_mass);

    if (premise.holds) {
        r.holds = topological.holds && metrical.holds;
        r.detail = r.holds ? "divergent return series and almost every point recurrent"
                           : "premise holds but a positive-mass set of points is non-recurrent";
    } else {
        r.holds = true;
        r.detail = "premise fails (convergent return series for some set); nothing to check";
    }
    r.parts = {std::move(premise), std::move(topological), std::move(metrical)};
    return r;
}

TheoremReport verify_conservativity(const StochasticKernel& q, const ReferenceMeasure& m) {
    TheoremReport r;
    r.theorem = "conservativity";
    PropertyVerdict series = return_series_check(q, m);
    PropertyVerdict forward = cons_forward_check(q, m);
    PropertyVerdict backward = cons_backward_check(q, m);

    PropertyVerdict equiv;
    equiv.property = "return-series-matches-forward-conservativity";
    equiv.holds = series.holds == forward.holds;
    equiv.detail = "return series " + std::string(series.holds ? "divergent" : "convergent") +
                   ", forward conservativity " + std::string(forward.holds ? "holds" : "fails");

    PropertyVerdict order;
    order.property = "backward-conservativity-implies-forward";
    order.holds = !(backward.holds && !forward.holds);
    order.detail = "backward " + std::string(backward.holds ? "holds" : "fails") + ", forward " +
                   std::string(forward.holds ? "holds" : "fails");

    r.holds = equiv.holds && order.holds;
    r.detail = r.holds ? "conservativity relations consistent"
                       : "conservativity relations violated";

    // One-sided relations, reported for inspection but not asserted: the
    // forward series and the pushforward series each sit strictly between
    // recurrence and conservativity on general chains.
    PropertyVerdict prp = prp_check(q, m);
    PropertyVerdict fwd_series = forward_series_check(q, m);
    PropertyVerdict push_series = pushforward_series_check(q, m);

    r.parts = {std::move(equiv),   std::move(order),      std::move(series),
               std::move(forward), std::move(backward),   std::move(prp),
               std::move(fwd_series), std::move(push_series)};
    return r;
}

bool recurrent_at_start_time(const KernelSchedule& schedule, long start_time, int x,
                             const SupportSet& a) {
    const int n = schedule.size();
    if (a.space_size() != n) throw DimensionMismatch("set does not match schedule space");
    if (x < 0 || x >= n) throw Error("state index out of range");
    if (start_time < 0) throw Error("start time must be nonnegative");

    // Follow the forward set orbit; the pair (schedule phase, current set)
    // determines the entire future, so a repeat proves no return ever.
    struct Key {
        long phase;
        SupportSet front;
        bool operator==(const Key& o) const { return phase == o.phase && front == o.front; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return k.front.hash() * 1000003ULL ^ static_cast<std::size_t>(k.phase);
        }
    };
    std::unordered_set<Key, KeyHash> seen;
    SupportSet front = SupportSet::singleton(n, x);
    long t = start_time;
    seen.insert({schedule.phase(t), front});
    for (;;) {
        front = image(schedule.at(t), front);
        ++t;
        if (front.intersects(a)) return true;
        if (!seen.insert({schedule.phase(t), front}).second) return false;
    }
}

} // namespace chainrec
