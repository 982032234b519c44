#include "chainrec/state_space.hpp"

#include <cmath>
#include <unordered_set>

#include "chainrec/errors.hpp"

namespace chainrec {

StateSpace::StateSpace(std::vector<std::string> labels,
                       std::optional<std::vector<CellInterval>> cells)
    : labels_(std::move(labels)), cells_(std::move(cells)) {}

std::shared_ptr<const StateSpace> StateSpace::indexed(int n) {
    if (n < 1) throw Error("state space needs at least one state");
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return std::shared_ptr<const StateSpace>(new StateSpace(std::move(labels), std::nullopt));
}

std::shared_ptr<const StateSpace> StateSpace::labeled(std::vector<std::string> labels) {
    if (labels.empty()) throw Error("state space needs at least one state");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second) throw Error("duplicate state label: " + l);
    return std::shared_ptr<const StateSpace>(new StateSpace(std::move(labels), std::nullopt));
}

std::shared_ptr<const StateSpace> StateSpace::grid(std::vector<std::string> labels,
                                                   std::vector<CellInterval> cells) {
    if (labels.size() != cells.size())
        throw DimensionMismatch("labels and cells differ in length");
    auto base = labeled(std::move(labels));
    // Cells must tile [0, 1] in order, with endpoint ownership alternating.
    double cursor = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        if (!(c.lo == cursor))
            throw InvalidPartition("cell " + std::to_string(i) + " starts at " +
                                   std::to_string(c.lo) + ", expected " + std::to_string(cursor));
        if (!(c.hi > c.lo)) throw InvalidPartition("cell " + std::to_string(i) + " is degenerate");
        if (i > 0 && c.lo_closed == cells[i - 1].hi_closed)
            throw InvalidPartition("boundary point " + std::to_string(c.lo) +
                                   " owned by zero or two cells");
        cursor = c.hi;
    }
    if (cursor != 1.0) throw InvalidPartition("cells stop at " + std::to_string(cursor));
    if (!cells.front().lo_closed || !cells.back().hi_closed)
        throw InvalidPartition("endpoints of [0, 1] must belong to the boundary cells");
    return std::shared_ptr<const StateSpace>(
        new StateSpace(base->labels(), std::move(cells)));
}

int StateSpace::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == label) return i;
    return -1;
}

const std::vector<CellInterval>& StateSpace::cells() const {
    if (!cells_) throw Error("state space carries no interval cells");
    return *cells_;
}

ReferenceMeasure::ReferenceMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        double w = weights_[i];
        if (!std::isfinite(w) || w < 0.0)
            throw Error("measure weight " + std::to_string(i) + " is " + std::to_string(w));
        total_ += w;
    }
    if (weights_.empty()) throw Error("measure needs at least one state");
    if (total_ <= 0.0) throw Error("measure must have positive total mass");
}

ReferenceMeasure ReferenceMeasure::uniform(int n) {
    if (n < 1) throw Error("measure needs at least one state");
    return ReferenceMeasure(std::vector<double>(n, 1.0 / n));
}

ReferenceMeasure ReferenceMeasure::from_weights(std::vector<double> weights) {
    return ReferenceMeasure(std::move(weights));
}

double ReferenceMeasure::mass(const SupportSet& a) const {
    if (a.space_size() != size())
        throw DimensionMismatch("set size " + std::to_string(a.space_size()) +
                                " does not match measure on " + std::to_string(size()));
    double m = 0.0;
    for (int i = 0; i < size(); ++i)
        if (a.test(i)) m += weights_[i];
    return m;
}

SupportSet ReferenceMeasure::atoms() const {
    SupportSet s(size());
    for (int i = 0; i < size(); ++i)
        if (weights_[i] > 0.0) s.set(i);
    return s;
}

} // namespace chainrec
