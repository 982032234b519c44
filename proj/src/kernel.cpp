#include "chainrec/kernel.hpp"

#include <cmath>
#include <queue>

#include "chainrec/errors.hpp"

namespace chainrec {

namespace {

void check_same_space(int a, int b, const char* what) {
    if (a != b)
        throw DimensionMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " +
                                std::to_string(b));
}

} // namespace

StochasticKernel::StochasticKernel(StateSpacePtr space, std::vector<double> probs,
                                   std::vector<SupportSet> support)
    : space_(std::move(space)), probs_(std::move(probs)), support_(std::move(support)) {
    const int n = space_->size();
    if (probs_.size() != static_cast<std::size_t>(n) * n)
        throw DimensionMismatch("kernel entries do not form an n by n matrix");
    if (support_.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("kernel needs one support row per state");
    for (const auto& row : support_)
        if (row.space_size() != n)
            throw DimensionMismatch("support row lives on the wrong space");
}

double StochasticKernel::row_mass(int i, const SupportSet& a) const {
    if (a.space_size() != size())
        throw DimensionMismatch("set does not match kernel space");
    double m = 0.0;
    for (int j = 0; j < size(); ++j)
        if (a.test(j)) m += prob(i, j);
    return m;
}

StochasticKernel validate_kernel_flat(StateSpacePtr space, std::vector<double> probs) {
    const int n = space->size();
    if (probs.size() != static_cast<std::size_t>(n) * n)
        throw DimensionMismatch("expected " + std::to_string(n) + "x" + std::to_string(n) +
                                " entries, got " + std::to_string(probs.size()));
    const double row_tol = kRowTolPerState * n;
    std::vector<SupportSet> support;
    support.reserve(n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        SupportSet row(n);
        for (int j = 0; j < n; ++j) {
            double p = probs[static_cast<std::size_t>(i) * n + j];
            if (!std::isfinite(p)) throw Error("entry (" + std::to_string(i) + ", " +
                                               std::to_string(j) + ") is not finite");
            if (p < 0.0) throw NegativeEntry(i, j, p);
            sum += p;
            if (p > kSupportEpsilon) row.set(j);
        }
        if (std::abs(sum - 1.0) > row_tol) throw NonStochasticRow(i, sum);
        support.push_back(std::move(row));
    }
    return StochasticKernel(std::move(space), std::move(probs), std::move(support));
}

StochasticKernel validate_kernel(StateSpacePtr space,
                                 const std::vector<std::vector<double>>& rows) {
    const int n = space->size();
    if (rows.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("expected " + std::to_string(n) + " rows, got " +
                                std::to_string(rows.size()));
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (row.size() != static_cast<std::size_t>(n))
            throw DimensionMismatch("ragged kernel row");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return validate_kernel_flat(std::move(space), std::move(flat));
}

StochasticKernel kernel_from_map(StateSpacePtr space, const std::vector<int>& image_of) {
    const int n = space->size();
    if (image_of.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("map needs one image per state");
    std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<SupportSet> support;
    support.reserve(n);
    for (int i = 0; i < n; ++i) {
        int j = image_of[i];
        if (j < 0 || j >= n) throw Error("map image " + std::to_string(j) + " out of range");
        probs[static_cast<std::size_t>(i) * n + j] = 1.0;
        support.push_back(SupportSet::singleton(n, j));
    }
    return StochasticKernel(std::move(space), std::move(probs), std::move(support));
}

StochasticKernel identity_kernel(StateSpacePtr space) {
    const int n = space->size();
    std::vector<int> id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    return kernel_from_map(std::move(space), id);
}

StochasticKernel compose(const StochasticKernel& a, const StochasticKernel& b) {
    check_same_space(a.size(), b.size(), "compose");
    const int n = a.size();
    std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            double aik = a.prob(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j)
                probs[static_cast<std::size_t>(i) * n + j] += aik * b.prob(k, j);
        }
    }
    bool underflow = a.support_underflow() || b.support_underflow();
    std::vector<SupportSet> support;
    support.reserve(n);
    for (int i = 0; i < n; ++i) {
        SupportSet structural(n);
        for (int k = 0; k < n; ++k)
            if (a.supports(i, k)) structural |= b.row_support(k);
        SupportSet row(n);
        for (int j = 0; j < n; ++j) {
            bool numeric = probs[static_cast<std::size_t>(i) * n + j] > kSupportEpsilon;
            if (structural.test(j) && numeric)
                row.set(j);
            else if (structural.test(j) && !numeric)
                underflow = true;
        }
        support.push_back(std::move(row));
    }
    StochasticKernel out(a.space(), std::move(probs), std::move(support));
    if (underflow) out.mark_support_underflow();
    return out;
}

StochasticKernel kernel_power(const StochasticKernel& q, long t) {
    if (t < 0) throw Error("kernel power needs t >= 0");
    StochasticKernel acc = identity_kernel(q.space());
    for (long s = 0; s < t; ++s) acc = compose(acc, q);
    return acc;
}

ReferenceMeasure pushforward(const StochasticKernel& q, const ReferenceMeasure& m) {
    check_same_space(q.size(), m.size(), "pushforward");
    const int n = q.size();
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double w = m.weight(i);
        if (w == 0.0) continue;
        for (int j = 0; j < n; ++j) out[j] += w * q.prob(i, j);
    }
    return ReferenceMeasure::from_weights(std::move(out));
}

FunctionOnStates pullback(const StochasticKernel& q, const FunctionOnStates& f) {
    check_same_space(q.size(), static_cast<int>(f.values.size()), "pullback");
    const int n = q.size();
    FunctionOnStates out;
    out.values.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += q.prob(i, j) * f.values[j];
        out.values[i] = acc;
    }
    return out;
}

GeneratorMatrix::GeneratorMatrix(StateSpacePtr space, std::vector<double> rates)
    : space_(std::move(space)), rates_(std::move(rates)) {
    const int n = space_->size();
    if (rates_.size() != static_cast<std::size_t>(n) * n)
        throw DimensionMismatch("generator entries do not form an n by n matrix");
}

GeneratorMatrix validate_generator(StateSpacePtr space,
                                   const std::vector<std::vector<double>>& rows) {
    const int n = space->size();
    if (rows.size() != static_cast<std::size_t>(n))
        throw DimensionMismatch("expected " + std::to_string(n) + " generator rows");
    const double row_tol = kRowTolPerState * n;
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (rows[i].size() != static_cast<std::size_t>(n))
            throw DimensionMismatch("ragged generator row");
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            double r = rows[i][j];
            if (!std::isfinite(r)) throw InvalidGenerator("rate (" + std::to_string(i) + ", " +
                                                          std::to_string(j) + ") is not finite");
            if (i != j && r < 0.0)
                throw InvalidGenerator("negative off-diagonal rate at (" + std::to_string(i) +
                                       ", " + std::to_string(j) + ")");
            sum += r;
        }
        if (std::abs(sum) > row_tol)
            throw InvalidGenerator("generator row " + std::to_string(i) + " sums to " +
                                   std::to_string(sum));
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return GeneratorMatrix(std::move(space), std::move(flat));
}

StochasticKernel kernel_from_generator(const GeneratorMatrix& g, double gamma, double tol) {
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw InvalidGamma("time scale must be positive and finite, got " + std::to_string(gamma));
    if (!(tol > 0.0) || tol > 1e-6)
        throw Error("uniformization tolerance must lie in (0, 1e-6]");
    const int n = g.size();

    // Support first: j is reachable from i at any positive time iff the rate
    // graph has a path i -> j, and the diagonal always carries mass.
    std::vector<SupportSet> support;
    support.reserve(n);
    for (int i = 0; i < n; ++i) {
        SupportSet reach = SupportSet::singleton(n, i);
        std::queue<int> frontier;
        frontier.push(i);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int v = 0; v < n; ++v) {
                if (u == v || g.rate(u, v) <= 0.0 || reach.test(v)) continue;
                reach.set(v);
                frontier.push(v);
            }
        }
        support.push_back(std::move(reach));
    }

    double lambda = 0.0;
    for (int i = 0; i < n; ++i) lambda = std::max(lambda, -g.rate(i, i));
    std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
    if (lambda == 0.0) {
        for (int i = 0; i < n; ++i) probs[static_cast<std::size_t>(i) * n + i] = 1.0;
        return StochasticKernel(g.space(), std::move(probs), std::move(support));
    }

    // Uniformized jump matrix P = I + G / lambda.
    std::vector<double> jump(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            jump[static_cast<std::size_t>(i) * n + j] =
                (i == j ? 1.0 : 0.0) + g.rate(i, j) / lambda;

    // exp(gamma G) = sum_k Poisson(lambda gamma)(k) P^k, truncated once the
    // accumulated Poisson mass reaches 1 - tol, then renormalized by it.
    const double mu = lambda * gamma;
    double weight = std::exp(-mu);
    double covered = weight;
    std::vector<double> pk(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) pk[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (std::size_t e = 0; e < probs.size(); ++e) probs[e] = weight * pk[e];

    std::vector<double> next(static_cast<std::size_t>(n) * n);
    for (long k = 1; covered < 1.0 - tol; ++k) {
        if (k > 1000000) throw Error("uniformization failed to converge");
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                double pil = pk[static_cast<std::size_t>(i) * n + l];
                if (pil == 0.0) continue;
                for (int j = 0; j < n; ++j)
                    next[static_cast<std::size_t>(i) * n + j] +=
                        pil * jump[static_cast<std::size_t>(l) * n + j];
            }
        pk.swap(next);
        weight *= mu / static_cast<double>(k);
        covered += weight;
        for (std::size_t e = 0; e < probs.size(); ++e) probs[e] += weight * pk[e];
    }
    for (auto& p : probs) p /= covered;
    StochasticKernel out(g.space(), std::move(probs), std::move(support));
    // The mask is reachability-exact, so a supported entry can still carry a
    // weight below the numeric threshold; flag that the mask is richer.
    for (int i = 0; i < n && !out.support_underflow(); ++i)
        for (int j = 0; j < n; ++j)
            if (out.supports(i, j) && out.prob(i, j) <= kSupportEpsilon) {
                out.mark_support_underflow();
                break;
            }
    return out;
}

KernelSchedule::KernelSchedule(std::vector<StochasticKernel> head,
                               std::vector<StochasticKernel> tail)
    : head_(std::move(head)), tail_(std::move(tail)) {
    if (tail_.empty()) throw Error("schedule needs a nonempty repeating tail");
    const int n = tail_.front().size();
    for (const auto& q : head_) check_same_space(q.size(), n, "schedule");
    for (const auto& q : tail_) check_same_space(q.size(), n, "schedule");
}

KernelSchedule KernelSchedule::homogeneous(StochasticKernel q) {
    std::vector<StochasticKernel> tail;
    tail.push_back(std::move(q));
    return KernelSchedule({}, std::move(tail));
}

int KernelSchedule::size() const { return tail_.front().size(); }
const StateSpacePtr& KernelSchedule::space() const { return tail_.front().space(); }

const StochasticKernel& KernelSchedule::at(long s) const {
    if (s < 0) throw Error("schedule time must be nonnegative");
    const long h = head_length();
    if (s < h) return head_[s];
    return tail_[(s - h) % tail_period()];
}

long KernelSchedule::phase(long s) const {
    if (s < 0) throw Error("schedule time must be nonnegative");
    const long h = head_length();
    return s < h ? s : h + (s - h) % tail_period();
}

StochasticKernel schedule_step(const KernelSchedule& schedule, long from_time, long steps) {
    if (steps < 0) throw Error("schedule step count must be nonnegative");
    StochasticKernel acc = identity_kernel(schedule.space());
    for (long t = 0; t < steps; ++t) acc = compose(acc, schedule.at(from_time + t));
    return acc;
}

} // namespace chainrec
