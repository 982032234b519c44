#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/piecewise_map.hpp"
#include "chainrec/state_space.hpp"

namespace chainrec {

/// Exact rational from "p/q", a decimal string, or an integer string.
Rat parse_rational(const std::string& text);

enum class ChainKind { Kernel, Generator, Schedule, Map };

/// A chain description loaded from a JSON document.  Exactly one of matrix,
/// generator, schedule, or map defines the dynamics; see docs/chain-spec.md
/// for the format.
struct ParsedChain {
    std::string name;
    ChainKind kind = ChainKind::Kernel;

    StateSpacePtr space;  // null for map chains; their grid comes later
    std::optional<ReferenceMeasure> measure;

    std::optional<StochasticKernel> kernel;
    std::optional<GeneratorMatrix> generator;
    std::optional<double> gamma;
    std::optional<KernelSchedule> schedule;
    std::optional<PiecewiseMap> map;
    std::vector<int> refine;  // grid resolutions for map chains

    std::map<std::string, std::vector<int>> named_sets;

    /// The chain as a single kernel: the kernel itself, exp(gamma G) for
    /// generators (file gamma unless overridden), or the tail kernel of a
    /// homogeneous schedule.  Throws for map chains and genuinely
    /// inhomogeneous schedules.
    StochasticKernel require_kernel(std::optional<double> gamma_override = std::nullopt) const;

    KernelSchedule as_schedule(std::optional<double> gamma_override = std::nullopt) const;

    /// The file's measure, or uniform when none was given.
    ReferenceMeasure require_measure() const;
};

ParsedChain parse_chain_spec(const std::string& path);
ParsedChain parse_chain_spec_text(const std::string& text, const std::string& origin);

} // namespace chainrec
