#pragma once

#include <utility>
#include <vector>

#include "chainrec/kernel.hpp"
#include "chainrec/support_set.hpp"

namespace chainrec {

/// Communicating class of the support graph.  A class is closed when no
/// support edge leaves it; cyclic when its states can return to themselves
/// (more than one state, or a self transition).
struct CommunicatingClass {
    SupportSet members;
    bool closed = false;
    bool cyclic = false;
};

/// Strongly connected components of the support graph in topological order
/// (every support edge goes from a class to itself or to a later class).
struct SccDecomposition {
    std::vector<CommunicatingClass> classes;
    std::vector<int> class_of;                 // state -> class index
    std::vector<std::pair<int, int>> dag_edges; // condensation edges, deduplicated

    /// reaches(c, d): some state of class c has a support path (possibly
    /// empty) into class d.
    bool reaches(int c, int d) const { return class_reach[c].test(d); }
    std::vector<SupportSet> class_reach;       // index: class, bits: classes
};

SccDecomposition scc_decomposition(const StochasticKernel& q);

/// Rows of the transitive closure: reach_one_or_more(q)[x] is the set of
/// states reachable from x along support paths of length at least one.
std::vector<SupportSet> reach_one_or_more(const StochasticKernel& q);

} // namespace chainrec
