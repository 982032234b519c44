#include "chainrec/grid.hpp"

#include <string>

#include "chainrec/errors.hpp"
#include "chainrec/scc.hpp"

namespace chainrec {

namespace {

RatInterval cell_interval(int i, int n) {
    // Two-argument mpq construction skips canonicalization, which exact
    // comparisons elsewhere rely on.
    Rat lo(i, n), hi(i + 1, n);
    lo.canonicalize();
    hi.canonicalize();
    RatInterval c{lo, hi, false, true};
    if (i == n - 1) c.hi_open = false;
    return c;
}

/// Cell index of an exact point; boundary points i/n belong to cell i.
int cell_of(const Rat& x, int n) {
    Rat scaled = x * n;
    mpz_class idx = scaled.get_num() / scaled.get_den();
    long i = idx.get_si();
    if (i == n) i = n - 1;  // x == 1
    return static_cast<int>(i);
}

} // namespace

GridKernelPair discretize_map(const PiecewiseMap& map, int n_cells) {
    if (n_cells < 2) throw InvalidPartition("grid needs at least 2 cells");
    const int n = n_cells;

    std::vector<std::string> labels;
    std::vector<CellInterval> bounds;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) {
        labels.push_back("c" + std::to_string(i));
        bounds.push_back(
            {static_cast<double>(i) / n, static_cast<double>(i + 1) / n, true, i == n - 1});
    }
    StateSpacePtr space = StateSpace::grid(std::move(labels), std::move(bounds));

    std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<SupportSet> outer;
    std::vector<SupportSet> inner;
    outer.reserve(n);
    inner.reserve(n);
    const Rat cell_len(1, n);

    for (int i = 0; i < n; ++i) {
        SupportSet outer_row(n);
        SupportSet inner_row(n);
        std::vector<Rat> weight(n, Rat(0));

        for (const auto& frag : map.image_fragments(cell_interval(i, n))) {
            const Rat share = frag.source_length / cell_len;
            if (frag.image.is_point()) {
                const int k = cell_of(frag.image.lo, n);
                outer_row.set(k);
                // Constant pieces push their whole segment onto one point;
                // override fragments arrive with zero share.
                weight[k] += share;
                continue;
            }
            const Rat img_len = frag.image.length();
            for (int k = cell_of(frag.image.lo, n); k <= cell_of(frag.image.hi, n) && k < n;
                 ++k) {
                auto overlap = intersect(frag.image, cell_interval(k, n));
                if (!overlap) continue;
                outer_row.set(k);
                if (!overlap->is_point()) weight[k] += share * overlap->length() / img_len;
            }
        }

        for (int k = 0; k < n; ++k) {
            if (weight[k] > 0) {
                inner_row.set(k);
                probs[static_cast<std::size_t>(i) * n + k] = weight[k].get_d();
            }
        }
        outer.push_back(std::move(outer_row));
        inner.push_back(std::move(inner_row));
    }

    StochasticKernel kernel(space, std::move(probs), std::move(outer));
    return GridKernelPair{space, std::move(kernel), std::move(inner)};
}

std::vector<RefinementStep> classify_with_refinement(const PiecewiseMap& map,
                                                     const std::vector<int>& resolutions) {
    std::vector<RefinementStep> out;
    out.reserve(resolutions.size());
    for (int n : resolutions) {
        GridKernelPair grid = discretize_map(map, n);
        const std::vector<SupportSet> reach = reach_one_or_more(grid.outer);
        RefinementStep step;
        step.n_cells = n;
        step.verdicts.reserve(n);
        int unknown = 0;
        for (int i = 0; i < n; ++i) {
            bool may_return = reach[i].test(i);
            step.verdicts.push_back(may_return ? CellVerdict::Unknown
                                               : CellVerdict::CertainNonrecurrent);
            if (may_return) ++unknown;
        }
        step.unknown_length = static_cast<double>(unknown) / n;
        out.push_back(std::move(step));
    }
    return out;
}

} // namespace chainrec
