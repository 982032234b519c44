#pragma once

#include <optional>

#include "chainrec/kernel.hpp"
#include "chainrec/state_space.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// Outcome of searching for a common return time: the smallest n >= 1 with
/// m(a ∩ Q^-n(a) ∩ ... ∩ Q^-(k-1)n(a)) > 0, if one exists in the searched
/// range.
struct MultiRecResult {
    int k = 0;
    std::optional<long> found_n;
    double mass = 0.0;       // mass of the k-fold intersection at found_n
    long searched_bound = 0; // largest n examined
    bool exhaustive = false; // the searched range decides all n >= 1
};

/// Searches for the smallest common return time using the preimage trace:
/// every Q^-jn(a) is read off the trace, and since the trace is eventually
/// periodic the range n <= preperiod + period is decisive.  Passing n_max
/// caps the search below that bound.
MultiRecResult multiple_return_probe(const StochasticKernel& q, const ReferenceMeasure& m,
                                     const SupportSet& a, int k,
                                     std::optional<long> n_max = std::nullopt);

/// Reference implementation: recomputes each Q^-jn(a) by n-fold preimage
/// iteration, no trace sharing.  Exists as an independent route for testing
/// the probe; O(k n^2) preimage applications up to n_limit.
MultiRecResult multiple_return_oracle(const StochasticKernel& q, const ReferenceMeasure& m,
                                      const SupportSet& a, int k, long n_limit);

} // namespace chainrec
