#pragma once

#include <stdexcept>
#include <string>

namespace chainrec {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands live on state spaces of different sizes.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// A kernel row has a negative entry.
struct NegativeEntry : Error {
    NegativeEntry(int row, int col, double value)
        : Error("negative entry at (" + std::to_string(row) + ", " + std::to_string(col) +
                "): " + std::to_string(value)),
          row(row), col(col), value(value) {}
    int row, col;
    double value;
};

/// A kernel row does not sum to one within tolerance.
struct NonStochasticRow : Error {
    NonStochasticRow(int row, double sum)
        : Error("row " + std::to_string(row) + " sums to " + std::to_string(sum)),
          row(row), sum(sum) {}
    int row;
    double sum;
};

/// Off-diagonal rate negative, or row sums of a generator are not zero.
struct InvalidGenerator : Error {
    using Error::Error;
};

/// Time scale passed to the exponential map is not a positive finite number.
struct InvalidGamma : Error {
    using Error::Error;
};

/// The operation needs a set of positive reference mass.
struct EmptySetError : Error {
    using Error::Error;
};

/// Exhaustive subset enumeration was requested on a space that is too large.
struct FamilyTooLarge : Error {
    using Error::Error;
};

/// Malformed chain description (file or inline document).
struct ParseError : Error {
    using Error::Error;
};

/// Interval cells fail to partition the unit interval.
struct InvalidPartition : Error {
    using Error::Error;
};

} // namespace chainrec
