#include "chainrec/piecewise_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chainrec/errors.hpp"

namespace chainrec {

namespace {

const Rat kZero(0);
const Rat kOne(1);

Rat reflect(const Rat& x) { return kOne - x; }

RatInterval reflect_interval(const RatInterval& j) {
    return {reflect(j.hi), reflect(j.lo), j.hi_open, j.lo_open};
}

bool below(const Rat& x, const Rat& bound, bool bound_open) {
    return bound_open ? x < bound : x <= bound;
}

} // namespace

bool RatInterval::contains(const Rat& x) const {
    if (lo_open ? x <= lo : x < lo) return false;
    return below(x, hi, hi_open);
}

std::optional<RatInterval> intersect(const RatInterval& a, const RatInterval& b) {
    RatInterval r = a;
    if (b.lo > r.lo || (b.lo == r.lo && b.lo_open)) {
        r.lo = b.lo;
        r.lo_open = b.lo == a.lo ? (a.lo_open || b.lo_open) : b.lo_open;
    }
    if (b.hi < r.hi || (b.hi == r.hi && b.hi_open)) {
        r.hi = b.hi;
        r.hi_open = b.hi == a.hi ? (a.hi_open || b.hi_open) : b.hi_open;
    }
    if (r.lo > r.hi) return std::nullopt;
    if (r.lo == r.hi && (r.lo_open || r.hi_open)) return std::nullopt;
    return r;
}

PiecewiseMap::PiecewiseMap(std::vector<MapPiece> pieces,
                           std::vector<std::pair<Rat, Rat>> overrides)
    : pieces_(std::move(pieces)), overrides_(std::move(overrides)) {
    if (pieces_.empty()) throw Error("map needs at least one piece");
    // Exact equality below assumes canonical rationals, which two-argument
    // mpq construction does not guarantee.
    for (auto& p : pieces_) {
        p.domain.lo.canonicalize();
        p.domain.hi.canonicalize();
        p.value.canonicalize();
    }
    for (auto& [point, value] : overrides_) {
        point.canonicalize();
        value.canonicalize();
    }
    Rat cursor = kZero;
    bool cursor_covered = false;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const RatInterval& d = pieces_[i].domain;
        if (d.lo != cursor)
            throw Error("piece " + std::to_string(i) + " leaves a gap before its domain");
        // The point at cursor must be owned exactly once: by the previous
        // piece (then this one starts open) or by this one (then closed).
        if (d.lo_open != cursor_covered)
            throw Error("boundary point at piece " + std::to_string(i) +
                        " owned by zero or two pieces");
        if (d.hi < d.lo || (d.hi == d.lo && (d.lo_open || d.hi_open)))
            throw Error("piece " + std::to_string(i) + " has an empty domain");
        if (pieces_[i].formula == PieceFormula::Constant &&
            (pieces_[i].value < kZero || pieces_[i].value > kOne))
            throw Error("constant piece value outside [0, 1]");
        cursor = d.hi;
        cursor_covered = !d.hi_open;
    }
    if (cursor != kOne || !cursor_covered) throw Error("pieces do not cover [0, 1]");
    if (pieces_.front().domain.lo_open) throw Error("pieces do not cover the left endpoint");

    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].formula != PieceFormula::Mirror) continue;
        // The reflected domain must avoid every mirror piece.
        RatInterval reflected = reflect_interval(pieces_[i].domain);
        for (const auto& other : pieces_)
            if (other.formula == PieceFormula::Mirror &&
                intersect(reflected, other.domain))
                throw Error("mirror piece reflects into a mirror piece");
    }

    for (const auto& [point, value] : overrides_) {
        if (point < kZero || point > kOne || value < kZero || value > kOne)
            throw Error("override outside [0, 1]");
        long hits = std::count_if(overrides_.begin(), overrides_.end(),
                                  [&](const auto& o) { return o.first == point; });
        if (hits != 1) throw Error("duplicate override point");
    }
}

int PiecewiseMap::piece_index(const Rat& x) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (pieces_[i].domain.contains(x)) return static_cast<int>(i);
    throw Error("point outside [0, 1]");
}

Rat PiecewiseMap::apply_continuous(const Rat& x) const {
    const MapPiece& p = pieces_[piece_index(x)];
    switch (p.formula) {
        case PieceFormula::Constant: return p.value;
        case PieceFormula::Square: return x * x;
        case PieceFormula::Mirror: return kOne - apply(reflect(x));
    }
    throw Error("unreachable");
}

Rat PiecewiseMap::apply(const Rat& x) const {
    for (const auto& [point, value] : overrides_)
        if (point == x) return value;
    return apply_continuous(x);
}

void PiecewiseMap::continuous_fragments(const RatInterval& j, int depth,
                                        std::vector<ImageFragment>& out) const {
    if (depth > 2) throw Error("mirror recursion too deep");
    for (const auto& piece : pieces_) {
        auto part = intersect(j, piece.domain);
        if (!part) continue;
        switch (piece.formula) {
            case PieceFormula::Constant:
                out.push_back({part->length(), {piece.value, piece.value, false, false}});
                break;
            case PieceFormula::Square:
                // x^2 is strictly increasing on [0, 1].
                out.push_back({part->length(),
                               {part->lo * part->lo, part->hi * part->hi, part->lo_open,
                                part->hi_open}});
                break;
            case PieceFormula::Mirror: {
                // Reflection preserves lengths, so the nested fragments keep
                // their source shares; only the images flip.
                std::vector<ImageFragment> nested;
                continuous_fragments(reflect_interval(*part), depth + 1, nested);
                for (auto& f : nested)
                    out.push_back({std::move(f.source_length), reflect_interval(f.image)});
                break;
            }
        }
    }
}

std::vector<PiecewiseMap::ImageFragment> PiecewiseMap::image_fragments(
    const RatInterval& query) const {
    RatInterval j = query;
    j.lo.canonicalize();
    j.hi.canonicalize();
    // Carve the override points out of j so the continuous fragments cover
    // exactly the non-overridden part, then add the override images back as
    // zero-length fragments.
    std::vector<Rat> cuts;
    for (const auto& [point, value] : overrides_)
        if (j.contains(point)) cuts.push_back(point);
    std::sort(cuts.begin(), cuts.end());

    std::vector<ImageFragment> out;
    RatInterval rest = j;
    bool emptied = false;
    for (const Rat& p : cuts) {
        RatInterval left{rest.lo, p, rest.lo_open, true};
        if (left.lo < left.hi) continuous_fragments(left, 0, out);
        if (p == rest.hi) {
            emptied = true;
            break;
        }
        rest = RatInterval{p, rest.hi, true, rest.hi_open};
    }
    if (!emptied) continuous_fragments(rest, 0, out);
    for (const auto& [point, value] : overrides_)
        if (j.contains(point)) out.push_back({Rat(0), {value, value, false, false}});
    return out;
}

namespace {

constexpr int kMaxExactDenominatorBits = 512;
constexpr int kFloatPrecisionBits = 320;
constexpr long kEndpointSnapBits = 1024;

bool denominator_too_large(const Rat& x) {
    return mpz_sizeinbase(x.get_den().get_mpz_t(), 2) > kMaxExactDenominatorBits;
}

mpf_class to_mpf(const Rat& x) {
    mpf_class f(0, kFloatPrecisionBits);
    mpf_set_q(f.get_mpf_t(), x.get_mpq_t());
    return f;
}

/// Continuous-formula evaluation in floating point; see OrbitResult notes.
mpf_class apply_float(const PiecewiseMap& map, const mpf_class& x) {
    for (const auto& piece : map.pieces()) {
        const mpf_class lo = to_mpf(piece.domain.lo);
        const mpf_class hi = to_mpf(piece.domain.hi);
        bool above_lo = piece.domain.lo_open ? x > lo : x >= lo;
        bool below_hi = piece.domain.hi_open ? x < hi : x <= hi;
        if (!above_lo || !below_hi) continue;
        switch (piece.formula) {
            case PieceFormula::Constant: return to_mpf(piece.value);
            case PieceFormula::Square: return x * x;
            case PieceFormula::Mirror: {
                mpf_class reflected = 1 - x;
                return mpf_class(1 - apply_float(map, reflected), kFloatPrecisionBits);
            }
        }
    }
    throw Error("float orbit left [0, 1]");
}

void snap_endpoints(mpf_class& x) {
    static const mpf_class tiny = [] {
        mpf_class t(1, kFloatPrecisionBits);
        mpf_div_2exp(t.get_mpf_t(), t.get_mpf_t(), kEndpointSnapBits);
        return t;
    }();
    if (x < tiny) x = 0;
    if (1 - x < tiny) x = 1;
}

} // namespace

OrbitResult orbit_return_test(const PiecewiseMap& map, const Rat& start, double eps,
                              long t_max) {
    Rat x0 = start;
    x0.canonicalize();
    if (x0 < kZero || x0 > kOne) throw Error("orbit start outside [0, 1]");
    if (!(eps > 0.0)) throw Error("return radius must be positive");
    if (t_max < 1) throw Error("orbit horizon must be at least 1");

    OrbitResult r;
    r.min_distance = std::numeric_limits<double>::infinity();
    const Rat eps_rat(eps);

    Rat x = x0;
    bool exact = !denominator_too_large(x0);
    mpf_class xf(0, kFloatPrecisionBits);
    const mpf_class x0f = to_mpf(x0);
    if (!exact) xf = to_mpf(x0);

    for (long t = 1; t <= t_max; ++t) {
        bool fixed_point = false;
        bool value_exact;
        if (exact) {
            Rat next = map.apply(x);
            fixed_point = next == x;
            value_exact = true;
            r.exact_steps = t;
            if (denominator_too_large(next)) {
                exact = false;
                xf = to_mpf(next);
                value_exact = false;  // stored representation is rounded now
            } else {
                x = next;
            }
        } else {
            mpf_class next = apply_float(map, xf);
            snap_endpoints(next);
            fixed_point = next == xf;
            xf = next;
            value_exact = false;
        }
        r.steps = t;

        if (value_exact) {
            Rat dist = x >= x0 ? x - x0 : x0 - x;
            r.min_distance = std::min(r.min_distance, dist.get_d());
            if (dist < eps_rat) {
                r.returned_at = t;
                return r;
            }
        } else {
            mpf_class dist = xf >= x0f ? mpf_class(xf - x0f) : mpf_class(x0f - xf);
            double d = dist.get_d();
            r.min_distance = std::min(r.min_distance, d);
            if (d < eps) {
                r.returned_at = t;
                return r;
            }
        }
        // A fixed point pins the orbit, so the remaining horizon cannot add
        // new distances; the result already equals the full t_max answer.
        if (fixed_point) return r;
    }
    return r;
}

} // namespace chainrec
