#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace chainrec {

using Rat = mpq_class;

/// Nonempty subinterval of [0, 1] with explicit endpoint ownership.
struct RatInterval {
    Rat lo, hi;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(const Rat& x) const;
    bool is_point() const { return lo == hi; }
    Rat length() const { return hi - lo; }
};

/// Intersection, or nullopt when empty.
std::optional<RatInterval> intersect(const RatInterval& a, const RatInterval& b);

enum class PieceFormula {
    Constant,  // T(x) = value
    Square,    // T(x) = x^2
    Mirror,    // T(x) = 1 - T(1 - x), delegating to the piece covering 1 - x
};

struct MapPiece {
    RatInterval domain;
    PieceFormula formula = PieceFormula::Square;
    Rat value;  // Constant only
};

/// Piecewise self-map of [0, 1]: ordered pieces tiling the interval exactly,
/// plus finitely many single-point overrides that win over the formulas.
/// Mirror pieces must reflect into non-mirror territory, so evaluation never
/// chases its own tail.
class PiecewiseMap {
  public:
    PiecewiseMap(std::vector<MapPiece> pieces, std::vector<std::pair<Rat, Rat>> overrides);

    const std::vector<MapPiece>& pieces() const { return pieces_; }
    const std::vector<std::pair<Rat, Rat>>& overrides() const { return overrides_; }

    /// Exact image of a point, overrides included.
    Rat apply(const Rat& x) const;

    /// Image of x by the piece formulas alone.
    Rat apply_continuous(const Rat& x) const;

    /// One maximal sub-interval of the input that maps through a single
    /// formula chain, together with its exact image.  source_length is the
    /// length of the sub-interval (zero for override points), so the
    /// fragments of j partition its length exactly.
    struct ImageFragment {
        Rat source_length;
        RatInterval image;
    };

    /// Exact image decomposition of an interval: continuous images of j with
    /// the override points carved out, plus a zero-length fragment per
    /// override.  The union of the fragment images is exactly T(j), and the
    /// source lengths sum to the length of j.
    std::vector<ImageFragment> image_fragments(const RatInterval& j) const;

    int piece_index(const Rat& x) const;

  private:
    void continuous_fragments(const RatInterval& j, int depth,
                              std::vector<ImageFragment>& out) const;

    std::vector<MapPiece> pieces_;
    std::vector<std::pair<Rat, Rat>> overrides_;
};

/// Orbit search for a return of x0 to within eps of itself.
///
/// The orbit runs in exact rational arithmetic until the denominator exceeds
/// 2^512 bits, then switches to 320-bit floating point.  The float phase
/// uses the continuous piece formulas only: a rounded value landing exactly
/// on an override point is an artifact of finite precision, not a property
/// of the true orbit, which almost surely misses such measure-zero points.
/// Values within 2^-1024 of 0 or 1 are snapped onto the endpoint to keep
/// exponents bounded.  exact_steps reports how long the exact phase lasted.
struct OrbitResult {
    std::optional<long> returned_at;
    double min_distance = 0.0;
    long steps = 0;
    long exact_steps = 0;
};

OrbitResult orbit_return_test(const PiecewiseMap& map, const Rat& x0, double eps, long t_max);

} // namespace chainrec
