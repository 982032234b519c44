#pragma once

#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/piecewise_map.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// Grid discretization of an interval map on n uniform cells.
///
/// The outer kernel records cell i -> cell k whenever the exact image
/// T(cell_i) meets cell k, including the measure-zero images of point
/// overrides, so its support over-approximates every true orbit and any
/// non-return it certifies is sound.  Its numeric entries spread the length
/// of each source segment over the target cells in proportion to overlap
/// with the exact image interval.  inner_support keeps only the transitions
/// carrying positive length, i.e. the mask of the positive numeric entries
/// before rounding.
struct GridKernelPair {
    StateSpacePtr space;
    StochasticKernel outer;
    std::vector<SupportSet> inner_support;
};

GridKernelPair discretize_map(const PiecewiseMap& map, int n_cells);

enum class CellVerdict {
    CertainNonrecurrent,  // no outer-support path returns the cell to itself
    Unknown,
};

struct RefinementStep {
    int n_cells = 0;
    std::vector<CellVerdict> verdicts;
    double unknown_length = 0.0;  // total length of cells left Unknown
};

/// Classifies cells at each resolution of the schedule.  Refining can only
/// shrink the region that fails to be certified, never certify a truly
/// recurrent cell, because every true orbit stays inside the outer support.
std::vector<RefinementStep> classify_with_refinement(const PiecewiseMap& map,
                                                     const std::vector<int>& resolutions);

} // namespace chainrec
