#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainrec/support_set.hpp"

namespace chainrec {

/// Half-open or closed subinterval of [0, 1] attached to a grid state.
/// lo_closed/hi_closed record which endpoints belong to the cell.
struct CellInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = false;
};

/// Finite state space: distinct labels, optionally with interval cells when
/// the states discretize [0, 1].
class StateSpace {
  public:
    static std::shared_ptr<const StateSpace> indexed(int n);
    static std::shared_ptr<const StateSpace> labeled(std::vector<std::string> labels);
    static std::shared_ptr<const StateSpace> grid(std::vector<std::string> labels,
                                                  std::vector<CellInterval> cells);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Index of a label, or -1 when absent.
    int index_of(const std::string& label) const;

    bool has_cells() const { return cells_.has_value(); }
    const std::vector<CellInterval>& cells() const;

  private:
    StateSpace(std::vector<std::string> labels, std::optional<std::vector<CellInterval>> cells);

    std::vector<std::string> labels_;
    std::optional<std::vector<CellInterval>> cells_;
};

using StateSpacePtr = std::shared_ptr<const StateSpace>;

/// Finite nonnegative reference measure with at least one positive atom.
class ReferenceMeasure {
  public:
    static ReferenceMeasure uniform(int n);
    static ReferenceMeasure from_weights(std::vector<double> weights);

    int size() const { return static_cast<int>(weights_.size()); }
    double weight(int i) const { return weights_.at(i); }
    const std::vector<double>& weights() const { return weights_; }
    double total() const { return total_; }

    double mass(const SupportSet& a) const;

    /// States carrying positive weight.
    SupportSet atoms() const;

  private:
    explicit ReferenceMeasure(std::vector<double> weights);

    std::vector<double> weights_;
    double total_ = 0.0;
};

/// Bounded measurable function on the state space, one value per state.
struct FunctionOnStates {
    std::vector<double> values;
};

/// Relative threshold below which a mass counts as null in almost-sure
/// statements: masses under kFullMeasureRelTol * m(X) are treated as zero.
inline constexpr double kFullMeasureRelTol = 1e-12;

} // namespace chainrec
