#pragma once

#include <string>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/state_space.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

enum class SeriesKind {
    PreimageReturn,   // sum over n >= 1 of m(Q^-n(A) intersect A)
    ForwardReturn,    // sum over n >= 0 of m(Q^-n(A) intersect A), image-side variant
    PushforwardMass,  // sum over n >= 1 of (Q^n m)(A)
};

/// Exact divergence decision for a nonnegative series, plus a finite window
/// of partial sums for reporting.  For the set-based series the decision
/// reads the term inside the eventual cycle of the underlying set trace, so
/// it is a statement about the full infinite sum, not a truncation.
struct DivergenceVerdict {
    SeriesKind kind;
    bool diverges = false;
    int trace_preperiod = 0;
    int trace_period = 0;
    std::vector<double> partial_sums;
    std::string witness;
};

/// Series of m(Q^-n(A) intersect A) over n >= 1.  Requires m(a) > 0.
DivergenceVerdict series_main(const StochasticKernel& q, const ReferenceMeasure& m,
                              const SupportSet& a);

/// Same series extended to n = 0; the n = 0 term equals m(a) and is always
/// positive, so divergence again hinges on the cycle terms.  Requires
/// m(a) > 0.
DivergenceVerdict series_forward(const StochasticKernel& q, const ReferenceMeasure& m,
                                 const SupportSet& a);

/// Series of (Q^n m)(a) over n >= 1.  The terms follow the power iteration
/// of m, so no finite window of them is conclusive on its own; the verdict
/// instead comes from a structural criterion on the support graph, with the
/// numeric partial sums reported alongside.  See docs/divergence.md.
DivergenceVerdict series_pushforward(const StochasticKernel& q, const ReferenceMeasure& m,
                                     const SupportSet& a);

/// Decision-only variants used by the exhaustive property checks.
bool series_main_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                          const SupportSet& a);
bool series_forward_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                             const SupportSet& a);
bool series_pushforward_diverges(const StochasticKernel& q, const ReferenceMeasure& m,
                                 const SupportSet& a);

} // namespace chainrec
