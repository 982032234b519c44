#include "chainrec/set_dynamics.hpp"

#include <unordered_map>

#include "chainrec/errors.hpp"

namespace chainrec {

SupportSet preimage(const StochasticKernel& q, const SupportSet& b) {
    if (b.space_size() != q.size()) throw DimensionMismatch("set does not match kernel space");
    SupportSet out(q.size());
    for (int i = 0; i < q.size(); ++i)
        if (q.row_support(i).intersects(b)) out.set(i);
    return out;
}

SupportSet image(const StochasticKernel& q, const SupportSet& a) {
    if (a.space_size() != q.size()) throw DimensionMismatch("set does not match kernel space");
    SupportSet out(q.size());
    for (int i : a.indices()) out |= q.row_support(i);
    return out;
}

SetTrace::SetTrace(std::vector<SupportSet> sets, int preperiod, int period)
    : sets_(std::move(sets)), preperiod_(preperiod), period_(period) {
    if (period_ < 1 || preperiod_ < 0 ||
        sets_.size() != static_cast<std::size_t>(preperiod_) + period_)
        throw Error("malformed set trace");
}

const SupportSet& SetTrace::at(long t) const {
    if (t < 0) throw Error("trace time must be nonnegative");
    if (t < static_cast<long>(sets_.size())) return sets_[t];
    return sets_[preperiod_ + (t - preperiod_) % period_];
}

SetTrace iterate_trace(const std::function<SupportSet(const SupportSet&)>& step,
                       const SupportSet& start) {
    std::vector<SupportSet> sets;
    std::unordered_map<SupportSet, int, SupportSetHash> seen;
    sets.push_back(start);
    seen.emplace(start, 0);
    for (;;) {
        SupportSet next = step(sets.back());
        auto [it, inserted] = seen.emplace(next, static_cast<int>(sets.size()));
        if (!inserted) {
            int preperiod = it->second;
            int period = static_cast<int>(sets.size()) - preperiod;
            return SetTrace(std::move(sets), preperiod, period);
        }
        sets.push_back(std::move(next));
    }
}

SetTrace preimage_trace(const StochasticKernel& q, const SupportSet& start) {
    return iterate_trace([&q](const SupportSet& s) { return preimage(q, s); }, start);
}

SetTrace image_trace(const StochasticKernel& q, const SupportSet& start) {
    return iterate_trace([&q](const SupportSet& s) { return image(q, s); }, start);
}

} // namespace chainrec
