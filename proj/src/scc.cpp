#include "chainrec/scc.hpp"

#include <algorithm>

namespace chainrec {

std::vector<SupportSet> reach_one_or_more(const StochasticKernel& q) {
    const int n = q.size();
    std::vector<SupportSet> reach;
    reach.reserve(n);
    for (int i = 0; i < n; ++i) reach.push_back(q.row_support(i));
    // Warshall over bit rows; paths keep length >= 1 because the seed rows
    // are the one-step edges.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i].test(k)) reach[i] |= reach[k];
    return reach;
}

SccDecomposition scc_decomposition(const StochasticKernel& q) {
    const int n = q.size();
    // Iterative Tarjan.  Emits components in reverse topological order.
    std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> comp_states;
    int next_index = 0;

    struct Frame {
        int v;
        int next_child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next_child < n) {
                int w = f.next_child++;
                if (!q.supports(f.v, w)) continue;
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
                continue;
            }
            if (lowlink[f.v] == index[f.v]) {
                comp_states.emplace_back();
                for (;;) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = static_cast<int>(comp_states.size()) - 1;
                    comp_states.back().push_back(w);
                    if (w == f.v) break;
                }
            }
            int v = f.v;
            call.pop_back();
            if (!call.empty()) lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
        }
    }

    // Tarjan's emission order is reverse topological; flip it.
    const int c = static_cast<int>(comp_states.size());
    SccDecomposition out;
    out.class_of.assign(n, -1);
    out.classes.assign(c, CommunicatingClass{SupportSet(n), false, false});
    for (int old_id = 0; old_id < c; ++old_id) {
        int new_id = c - 1 - old_id;
        CommunicatingClass& cls = out.classes[new_id];
        for (int s : comp_states[old_id]) {
            cls.members.set(s);
            out.class_of[s] = new_id;
        }
        cls.cyclic = comp_states[old_id].size() > 1 ||
                     q.supports(comp_states[old_id][0], comp_states[old_id][0]);
    }

    std::vector<SupportSet> edge_targets(c, SupportSet(c));
    for (int i = 0; i < n; ++i) {
        int ci = out.class_of[i];
        for (int j : q.row_support(i).indices()) {
            int cj = out.class_of[j];
            if (ci != cj) edge_targets[ci].set(cj);
        }
    }
    for (int ci = 0; ci < c; ++ci) {
        out.classes[ci].closed = edge_targets[ci].none();
        for (int cj : edge_targets[ci].indices()) out.dag_edges.emplace_back(ci, cj);
    }

    out.class_reach.assign(c, SupportSet(c));
    for (int ci = c - 1; ci >= 0; --ci) {
        out.class_reach[ci].set(ci);
        for (int cj : edge_targets[ci].indices()) out.class_reach[ci] |= out.class_reach[cj];
    }
    return out;
}

} // namespace chainrec
