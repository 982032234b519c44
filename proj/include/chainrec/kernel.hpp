#pragma once

#include <vector>

#include "chainrec/state_space.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// Entries at or below this threshold do not count as structural support.
inline constexpr double kSupportEpsilon = 1e-12;

/// Row sums may deviate from one by kRowTolPerState * n.
inline constexpr double kRowTolPerState = 1e-12;

/// Row-stochastic transition kernel together with an explicit support mask.
/// The mask is the source of truth for reachability questions; numeric
/// entries back the quantitative ones.  The two views are kept consistent by
/// the constructors in this header, except that a construction step may
/// record a structural transition whose numeric weight underflowed
/// (support_underflow) or, for interval discretizations, a deliberately
/// over-approximating mask.
class StochasticKernel {
  public:
    StochasticKernel(StateSpacePtr space, std::vector<double> probs,
                     std::vector<SupportSet> support);

    int size() const { return space_->size(); }
    const StateSpacePtr& space() const { return space_; }

    double prob(int i, int j) const { return probs_[static_cast<std::size_t>(i) * size() + j]; }
    bool supports(int i, int j) const { return support_[i].test(j); }
    const SupportSet& row_support(int i) const { return support_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    /// Q(x_i, A): total probability of stepping from state i into a.
    double row_mass(int i, const SupportSet& a) const;

    bool support_underflow() const { return support_underflow_; }
    void mark_support_underflow() { support_underflow_ = true; }

  private:
    StateSpacePtr space_;
    std::vector<double> probs_;
    std::vector<SupportSet> support_;
    bool support_underflow_ = false;
};

/// Validates row stochasticity and derives the support mask from the
/// entries: support holds exactly where prob > kSupportEpsilon.
StochasticKernel validate_kernel(StateSpacePtr space, const std::vector<std::vector<double>>& rows);
StochasticKernel validate_kernel_flat(StateSpacePtr space, std::vector<double> probs);

/// Deterministic kernel of a map on states: row x is the point mass at
/// image_of[x].
StochasticKernel kernel_from_map(StateSpacePtr space, const std::vector<int>& image_of);

StochasticKernel identity_kernel(StateSpacePtr space);

/// Chapman-Kolmogorov product: result(x, B) = integral of b(y, B) a(x, dy).
/// Support composes structurally (boolean matrix product) and is then
/// intersected with the numeric threshold; a structural edge that underflows
/// numerically sets support_underflow on the result.
StochasticKernel compose(const StochasticKernel& a, const StochasticKernel& b);

StochasticKernel kernel_power(const StochasticKernel& q, long t);

/// Image measure (Q m)(B) = integral of Q(x, B) dm(x).
ReferenceMeasure pushforward(const StochasticKernel& q, const ReferenceMeasure& m);

/// (Q* f)(x) = integral of f(y) Q(x, dy).
FunctionOnStates pullback(const StochasticKernel& q, const FunctionOnStates& f);

/// Conservative rate matrix: nonnegative off-diagonal entries, zero row sums.
class GeneratorMatrix {
  public:
    GeneratorMatrix(StateSpacePtr space, std::vector<double> rates);

    int size() const { return space_->size(); }
    const StateSpacePtr& space() const { return space_; }
    double rate(int i, int j) const { return rates_[static_cast<std::size_t>(i) * size() + j]; }

  private:
    StateSpacePtr space_;
    std::vector<double> rates_;
};

GeneratorMatrix validate_generator(StateSpacePtr space,
                                   const std::vector<std::vector<double>>& rows);

/// Q = exp(gamma G) via uniformization.  The support mask is the exact
/// reachability closure of the rate graph (self transitions always
/// included), never the thresholded numeric entries, so vanishing tail
/// probabilities cannot cut structural paths.
StochasticKernel kernel_from_generator(const GeneratorMatrix& g, double gamma,
                                       double tol = 1e-9);

/// Time-inhomogeneous driving sequence: a finite head followed by a
/// repeating tail, so kernel_at(s) is eventually periodic in s.
class KernelSchedule {
  public:
    KernelSchedule(std::vector<StochasticKernel> head, std::vector<StochasticKernel> tail);

    static KernelSchedule homogeneous(StochasticKernel q);

    int size() const;
    const StateSpacePtr& space() const;
    bool is_homogeneous() const { return head_.empty() && tail_.size() == 1; }

    /// Kernel driving the step from time s to s + 1.
    const StochasticKernel& at(long s) const;

    /// Canonical index of time s under the eventual periodicity: times with
    /// equal phase see identical kernel suffixes.
    long phase(long s) const;

    long head_length() const { return static_cast<long>(head_.size()); }
    long tail_period() const { return static_cast<long>(tail_.size()); }

  private:
    std::vector<StochasticKernel> head_, tail_;
};

/// Composition of `steps` consecutive kernels starting at from_time;
/// steps = 0 yields the identity.
StochasticKernel schedule_step(const KernelSchedule& schedule, long from_time, long steps);

} // namespace chainrec
