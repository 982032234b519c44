#pragma once

#include <functional>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// One-step preimage {x : Q(x, B) > 0}, read off the support mask.
SupportSet preimage(const StochasticKernel& q, const SupportSet& b);

/// One-step image: union of row supports over A.
SupportSet image(const StochasticKernel& q, const SupportSet& a);

/// Orbit of a set under a deterministic set map, folded at the first
/// repetition.  The power set is finite, so every orbit is eventually
/// periodic: sets holds S_0 .. S_{preperiod + period - 1} and at(t) resolves
/// any t by folding into the cycle.
class SetTrace {
  public:
    SetTrace(std::vector<SupportSet> sets, int preperiod, int period);

    const SupportSet& at(long t) const;
    int preperiod() const { return preperiod_; }
    int period() const { return period_; }

    /// Smallest horizon that exhibits every set of the orbit.
    long horizon() const { return preperiod_ + period_; }

    const std::vector<SupportSet>& sets() const { return sets_; }

  private:
    std::vector<SupportSet> sets_;
    int preperiod_, period_;
};

SetTrace iterate_trace(const std::function<SupportSet(const SupportSet&)>& step,
                       const SupportSet& start);

/// Trace of t |-> Q^-t(start).
SetTrace preimage_trace(const StochasticKernel& q, const SupportSet& start);

/// Trace of t |-> Q^t(start) in the image sense.
SetTrace image_trace(const StochasticKernel& q, const SupportSet& start);

} // namespace chainrec
