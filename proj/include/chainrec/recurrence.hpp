#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/state_space.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// Exhaustive subset enumeration is cut off above this many states.
inline constexpr int kMaxExhaustiveStates = 20;

/// Points of a that return to a with positive probability at some time
/// t >= 1.  Decided exactly on the support graph.
SupportSet poincare_recurrent_set(const StochasticKernel& q, const SupportSet& a);

/// Points of a that return to a with probability one at some deterministic
/// time t >= 1 (every support path of length t ends in a).
SupportSet strong_recurrent_set(const StochasticKernel& q, const SupportSet& a);

struct RecurrenceReport {
    SupportSet set_a;
    SupportSet recurrent;
    SupportSet nonrecurrent;
    SupportSet strong_recurrent;
    double nonrecurrent_mass = 0.0;
};

RecurrenceReport recurrence_report(const StochasticKernel& q, const ReferenceMeasure& m,
                                   const SupportSet& a);

/// x is topologically recurrent when it returns to every neighborhood of
/// itself with positive probability; on a discrete space the singleton {x}
/// is a neighborhood, so this reduces to a support cycle through x.
SupportSet topologically_recurrent_points(const StochasticKernel& q);

/// x is metrically recurrent when it returns with positive probability to
/// every set of positive m-measure containing x.  The binding test sets are
/// {x, y} for single atoms y, so the condition reduces to: x lies on a
/// support cycle, or every atom of m is forward-reachable from x.
SupportSet metrically_recurrent_points(const StochasticKernel& q, const ReferenceMeasure& m);

/// Family of sets a property is quantified over: every subset of the space,
/// or an explicit list.
class SetFamily {
  public:
    static SetFamily all_subsets() { return SetFamily(true, {}); }
    static SetFamily of(std::vector<SupportSet> sets) { return SetFamily(false, std::move(sets)); }

    bool exhaustive() const { return exhaustive_; }
    const std::vector<SupportSet>& sets() const { return sets_; }

  private:
    SetFamily(bool exhaustive, std::vector<SupportSet> sets)
        : exhaustive_(exhaustive), sets_(std::move(sets)) {}
    bool exhaustive_;
    std::vector<SupportSet> sets_;
};

struct PropertyVerdict {
    std::string property;
    bool holds = false;
    std::optional<SupportSet> witness;  // a set violating the property
    /// True when the space was too large to enumerate and the check ran on a
    /// structured subfamily only, so holds = true is not conclusive.
    bool family_restricted = false;
    std::string detail;
};

/// All nonempty subsets of an n-state space, in mask order.  Throws
/// FamilyTooLarge beyond kMaxExhaustiveStates.
std::vector<SupportSet> enumerate_subsets(int n);

/// Poincare recurrence property: for every a in the family with m(a) > 0,
/// the nonreturning part of a is m-null.
PropertyVerdict prp_check(const StochasticKernel& q, const ReferenceMeasure& m,
                          const SetFamily& family = SetFamily::all_subsets());

/// For every a with m(a) > 0 the return series sum_{n>=1} m(Q^-n(a) ∩ a)
/// diverges.
PropertyVerdict return_series_check(const StochasticKernel& q, const ReferenceMeasure& m);

/// Variant including the n = 0 term.
PropertyVerdict forward_series_check(const StochasticKernel& q, const ReferenceMeasure& m);

/// For every a with m(a) > 0 the pushforward series sum (Q^n m)(a) diverges.
PropertyVerdict pushforward_series_check(const StochasticKernel& q, const ReferenceMeasure& m);

/// Forward conservativity: every forward-invariant set (image(a) inside a)
/// loses no mass, m(a \ image(a)) = 0.
PropertyVerdict cons_forward_check(const StochasticKernel& q, const ReferenceMeasure& m);

/// Backward variant on preimages.
PropertyVerdict cons_backward_check(const StochasticKernel& q, const ReferenceMeasure& m);

struct TheoremReport {
    std::string theorem;
    bool holds = false;
    std::vector<PropertyVerdict> parts;
    std::string detail;
};

/// Equivalence of the divergent return series (over all positive-mass sets)
/// with the Poincare recurrence property.
TheoremReport verify_recurrence_equivalence(const StochasticKernel& q,
                                            const ReferenceMeasure& m);

/// Under a divergent return series for all sets, almost every point is
/// topologically and metrically recurrent.
TheoremReport verify_pointwise_recurrence(const StochasticKernel& q, const ReferenceMeasure& m);

/// Conservativity: (a) forward conservativity is equivalent to the
/// divergent return series; (c) backward conservativity implies forward.
/// The one-sided relations between the series variants and recurrence are
/// evaluated and reported alongside.
TheoremReport verify_conservativity(const StochasticKernel& q, const ReferenceMeasure& m);

/// Whether state x, started at time s, returns to a with positive
/// probability under the schedule at some t >= 1.  Decided exactly by
/// following the forward set orbit until it cycles against the schedule
/// phase.
bool recurrent_at_start_time(const KernelSchedule& schedule, long start_time, int x,
                             const SupportSet& a);

} // namespace chainrec
