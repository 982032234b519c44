// Command-line front end: loads chain description files, runs the exact
// analyses, and emits versioned JSON or CSV reports.
//
// Exit codes: 0 = requested work completed (and every verification passed),
// 1 = a verification check failed, 2 = unusable input or arguments.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "chainrec/chain_spec.hpp"
#include "chainrec/errors.hpp"
#include "chainrec/report.hpp"
#include "chainrec/set_dynamics.hpp"

namespace {

using namespace chainrec;

std::string joined_labels(const SupportSet& set, const StateSpace& space) {
    std::string out;
    for (int i : set.indices()) {
        if (!out.empty()) out += ';';
        out += space.label(i);
    }
    return out;
}

/// A set selector is a named set from the file, a state label, or a
/// '+'-joined union of those.
SupportSet set_from_selector(const ParsedChain& chain, const StateSpace& space,
                             const std::string& selector) {
    SupportSet s(space.size());
    std::stringstream ss(selector);
    std::string token;
    while (std::getline(ss, token, '+')) {
        const auto it = chain.named_sets.find(token);
        if (it != chain.named_sets.end()) {
            s |= SupportSet::from_indices(space.size(), it->second);
            continue;
        }
        const int idx = space.index_of(token);
        if (idx < 0)
            throw ParseError("'" + token + "' is neither a named set nor a state label");
        s.set(idx);
    }
    if (s.none()) throw ParseError("empty set selector");
    return s;
}

std::vector<std::pair<std::string, SupportSet>> chosen_sets(
    const ParsedChain& chain, const StateSpace& space,
    const std::vector<std::string>& selectors, bool default_full_space) {
    std::vector<std::pair<std::string, SupportSet>> out;
    if (selectors.empty()) {
        for (const auto& [name, indices] : chain.named_sets)
            out.emplace_back(name, SupportSet::from_indices(space.size(), indices));
        if (out.empty() && default_full_space)
            out.emplace_back("X", SupportSet::full(space.size()));
    } else {
        for (const auto& sel : selectors)
            out.emplace_back(sel, set_from_selector(chain, space, sel));
    }
    return out;
}

void emit(const Json& doc, const Json& rows, const std::string& format) {
    if (format == "csv")
        std::cout << rows_to_csv(rows);
    else
        std::cout << doc.dump(2) << "\n";
}

struct AnalyzeOpts {
    std::string input;
    std::string format = "json";
    std::vector<std::string> sets;
    std::optional<double> gamma;
    std::vector<int> refine;
    std::vector<std::string> orbit_starts;
    double eps = 0.1;
    long t_max = 10000;
    long start_times = 0;
};

int run_analyze_map(const ParsedChain& chain, const AnalyzeOpts& opts) {
    Json doc = report_envelope("analyze", chain.name);
    Json rows = Json::array();
    const std::vector<int>& resolutions = opts.refine.empty() ? chain.refine : opts.refine;
    doc["kind"] = "map";
    doc["refinement"] = Json::array();
    for (const auto& step : classify_with_refinement(*chain.map, resolutions)) {
        Json sj = to_json(step);
        doc["refinement"].push_back(sj);
        rows.push_back(std::move(sj));
    }
    if (!opts.orbit_starts.empty()) {
        doc["orbits"] = Json::array();
        for (const auto& text : opts.orbit_starts) {
            const Rat x0 = parse_rational(text);
            Json oj = to_json(orbit_return_test(*chain.map, x0, opts.eps, opts.t_max));
            oj["x0"] = text;
            oj["eps"] = opts.eps;
            oj["t_max"] = opts.t_max;
            doc["orbits"].push_back(std::move(oj));
        }
    }
    emit(doc, rows, opts.format);
    return 0;
}

int run_analyze_schedule(const ParsedChain& chain, const AnalyzeOpts& opts) {
    const KernelSchedule& sched = *chain.schedule;
    const StateSpace& space = *sched.space();
    Json doc = report_envelope("analyze", chain.name);
    Json rows = Json::array();
    doc["kind"] = "schedule";
    const long s_count =
        opts.start_times > 0 ? opts.start_times : sched.head_length() + sched.tail_period();
    doc["start_times_checked"] = s_count;
    doc["sets"] = Json::array();
    for (const auto& [name, a] : chosen_sets(chain, space, opts.sets, false)) {
        Json sj;
        sj["name"] = name;
        sj["set"] = to_json(a, space);
        sj["start_times"] = Json::array();
        for (long s = 0; s < s_count; ++s) {
            SupportSet recurrent(space.size());
            for (int x : a.indices())
                if (recurrent_at_start_time(sched, s, x, a)) recurrent.set(x);
            Json tj;
            tj["s"] = s;
            tj["recurrent"] = to_json(recurrent, space);
            tj["nonrecurrent"] = to_json(a.set_minus(recurrent), space);
            sj["start_times"].push_back(tj);

            Json row;
            row["set"] = name;
            row["start_time"] = s;
            row["recurrent"] = joined_labels(recurrent, space);
            row["nonrecurrent"] = joined_labels(a.set_minus(recurrent), space);
            rows.push_back(std::move(row));
        }
        doc["sets"].push_back(std::move(sj));
    }
    if (doc["sets"].empty())
        throw ParseError("no sets to analyze: pass --sets or add named sets to the file");
    emit(doc, rows, opts.format);
    return 0;
}

int run_analyze(const AnalyzeOpts& opts) {
    const ParsedChain chain = parse_chain_spec(opts.input);
    if (chain.kind == ChainKind::Map) return run_analyze_map(chain, opts);
    if (chain.kind == ChainKind::Schedule && !chain.schedule->is_homogeneous())
        return run_analyze_schedule(chain, opts);

    const StochasticKernel q = chain.require_kernel(opts.gamma);
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();

    Json doc = report_envelope("analyze", chain.name);
    Json rows = Json::array();
    doc["kind"] = "kernel";
    doc["states"] = space.size();
    doc["topologically_recurrent"] = to_json(topologically_recurrent_points(q), space);
    doc["metrically_recurrent"] = to_json(metrically_recurrent_points(q, m), space);

    const bool all_subsets =
        opts.sets.size() == 1 && (opts.sets[0] == "ALL_SUBSETS" || opts.sets[0] == "all-subsets");
    if (all_subsets) {
        int fully_recurrent = 0, losing_mass = 0;
        const auto subsets = enumerate_subsets(space.size());
        for (const auto& a : subsets) {
            const RecurrenceReport r = recurrence_report(q, m, a);
            if (r.nonrecurrent.none()) ++fully_recurrent;
            if (r.nonrecurrent_mass > 0) ++losing_mass;
        }
        Json fam;
        fam["sets_checked"] = subsets.size();
        fam["fully_recurrent"] = fully_recurrent;
        fam["sets_losing_mass"] = losing_mass;
        doc["family"] = fam;
        doc["prp"] = to_json(prp_check(q, m), space);
        doc["return_series"] = to_json(return_series_check(q, m), space);
        doc["pushforward_series"] = to_json(pushforward_series_check(q, m), space);
        Json row;
        row["sets_checked"] = subsets.size();
        row["fully_recurrent"] = fully_recurrent;
        row["sets_losing_mass"] = losing_mass;
        row["prp"] = doc["prp"]["holds"];
        rows.push_back(std::move(row));
        emit(doc, rows, opts.format);
        return 0;
    }

    doc["sets"] = Json::array();
    for (const auto& [name, a] : chosen_sets(chain, space, opts.sets, true)) {
        Json sj;
        sj["name"] = name;
        const RecurrenceReport r = recurrence_report(q, m, a);
        sj["report"] = to_json(r, space);
        Json row;
        row["set"] = name;
        row["recurrent"] = joined_labels(r.recurrent, space);
        row["nonrecurrent"] = joined_labels(r.nonrecurrent, space);
        row["strong_recurrent"] = joined_labels(r.strong_recurrent, space);
        row["nonrecurrent_mass"] = r.nonrecurrent_mass;
        if (m.mass(a) > 0) {
            Json series;
            series["return"] = to_json(series_main(q, m, a));
            series["forward_return"] = to_json(series_forward(q, m, a));
            series["pushforward"] = to_json(series_pushforward(q, m, a));
            row["return_diverges"] = series["return"]["diverges"];
            row["forward_return_diverges"] = series["forward_return"]["diverges"];
            row["pushforward_diverges"] = series["pushforward"]["diverges"];
            sj["series"] = std::move(series);
        } else {
            sj["series"] = nullptr;
            sj["note"] = "set has zero mass, series undefined";
        }
        doc["sets"].push_back(std::move(sj));
        rows.push_back(std::move(row));
    }
    emit(doc, rows, opts.format);
    return 0;
}

struct VerifyOpts {
    std::string input;
    std::string format = "json";
    std::optional<double> gamma;
    std::vector<int> theorems;
};

int run_verify(const VerifyOpts& opts) {
    const ParsedChain chain = parse_chain_spec(opts.input);
    const StochasticKernel q = chain.require_kernel(opts.gamma);
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();

    std::vector<int> theorems = opts.theorems.empty() ? std::vector<int>{1, 2, 3} : opts.theorems;
    Json doc = report_envelope("verify", chain.name);
    Json rows = Json::array();
    doc["theorems"] = Json::array();
    bool all_hold = true;
    for (int t : theorems) {
        TheoremReport r;
        switch (t) {
            case 1: r = verify_recurrence_equivalence(q, m); break;
            case 2: r = verify_pointwise_recurrence(q, m); break;
            case 3: r = verify_conservativity(q, m); break;
            default: throw ParseError("--theorem takes 1, 2, or 3");
        }
        all_hold = all_hold && r.holds;
        doc["theorems"].push_back(to_json(r, space));
        Json row;
        row["theorem"] = r.theorem;
        row["holds"] = r.holds;
        row["detail"] = r.detail;
        rows.push_back(std::move(row));
    }
    doc["all_hold"] = all_hold;
    emit(doc, rows, opts.format);
    return all_hold ? 0 : 1;
}

struct SimulateOpts {
    std::string input;
    std::string format = "csv";
    std::vector<std::string> sets;
    std::optional<double> gamma;
    std::string x0;
    long horizon = 10;
    long trials = 10000;
    std::uint64_t seed = 1;
};

int run_simulate(const SimulateOpts& opts) {
    const ParsedChain chain = parse_chain_spec(opts.input);
    const KernelSchedule sched = chain.as_schedule(opts.gamma);
    const StateSpace& space = *sched.space();

    int x0 = 0;
    if (!opts.x0.empty()) {
        x0 = space.index_of(opts.x0);
        if (x0 < 0) throw ParseError("unknown start state '" + opts.x0 + "'");
    }
    const auto sets = chosen_sets(chain, space, opts.sets, false);
    if (sets.empty())
        throw ParseError("no sets to simulate: pass --sets or add named sets to the file");

    Json doc = report_envelope("simulate", chain.name);
    doc["seed"] = opts.seed;
    Json rows = Json::array();
    for (const auto& [name, a] : sets) {
        const ReturnProbEstimate est =
            estimate_return_prob(sched, x0, a, opts.horizon, opts.trials, opts.seed);
        const double exact = exact_return_prob(sched, x0, a, opts.horizon);
        Json row;
        row["x"] = space.label(x0);
        row["set"] = name;
        row["t"] = opts.horizon;
        row["trials"] = est.trials;
        row["point"] = est.estimate;
        row["lo"] = est.wilson_lo;
        row["hi"] = est.wilson_hi;
        row["exact"] = exact;
        row["covered"] = est.wilson_lo <= exact && exact <= est.wilson_hi;
        rows.push_back(std::move(row));
    }
    doc["results"] = rows;
    emit(doc, rows, opts.format);
    return 0;
}

struct DiscretizeOpts {
    std::string input;
    std::string format = "json";
    std::vector<int> refine;
    bool with_matrix = false;
};

int run_discretize(const DiscretizeOpts& opts) {
    const ParsedChain chain = parse_chain_spec(opts.input);
    if (chain.kind != ChainKind::Map)
        throw ParseError("discretize needs a map chain; '" + chain.name + "' is not one");
    const std::vector<int>& resolutions = opts.refine.empty() ? chain.refine : opts.refine;

    Json doc = report_envelope("discretize", chain.name);
    Json rows = Json::array();
    doc["steps"] = Json::array();
    for (const auto& step : classify_with_refinement(*chain.map, resolutions)) {
        Json sj = to_json(step);
        doc["steps"].push_back(sj);
        rows.push_back(std::move(sj));
    }
    if (opts.with_matrix) {
        doc["grids"] = Json::array();
        for (int n : resolutions) {
            const GridKernelPair pair = discretize_map(*chain.map, n);
            Json gj;
            gj["cells"] = n;
            Json outer = Json::array(), outer_mask = Json::array(), inner_mask = Json::array();
            for (int i = 0; i < n; ++i) {
                Json row = Json::array(), om = Json::array(), im = Json::array();
                for (int j = 0; j < n; ++j) {
                    row.push_back(pair.outer.prob(i, j));
                    om.push_back(pair.outer.supports(i, j));
                    im.push_back(pair.inner_support[i].test(j));
                }
                outer.push_back(std::move(row));
                outer_mask.push_back(std::move(om));
                inner_mask.push_back(std::move(im));
            }
            gj["outer"] = std::move(outer);
            gj["outer_support"] = std::move(outer_mask);
            gj["inner_support"] = std::move(inner_mask);
            doc["grids"].push_back(std::move(gj));
        }
    }
    emit(doc, rows, opts.format);
    return 0;
}

struct MultirecOpts {
    std::string input;
    std::string format = "json";
    std::vector<std::string> sets;
    std::optional<double> gamma;
    std::vector<int> ks;
    std::optional<long> n_max;
};

int run_multirec(const MultirecOpts& opts) {
    const ParsedChain chain = parse_chain_spec(opts.input);
    const StochasticKernel q = chain.require_kernel(opts.gamma);
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();

    const auto sets = chosen_sets(chain, space, opts.sets, false);
    if (sets.empty())
        throw ParseError("no sets to probe: pass --sets or add named sets to the file");
    const std::vector<int> ks = opts.ks.empty() ? std::vector<int>{2} : opts.ks;

    Json doc = report_envelope("multirec", chain.name);
    Json rows = Json::array();
    doc["results"] = Json::array();
    for (const auto& [name, a] : sets) {
        for (int k : ks) {
            const MultiRecResult r = multiple_return_probe(q, m, a, k, opts.n_max);
            Json rj = to_json(r);
            rj["set"] = name;
            doc["results"].push_back(rj);
            Json row;
            row["set"] = name;
            row["k"] = r.k;
            row["found"] = r.found_n.has_value();
            row["n"] = r.found_n ? Json(*r.found_n) : Json(nullptr);
            row["mass"] = r.mass;
            row["searched_bound"] = r.searched_bound;
            row["exhaustive"] = r.exhaustive;
            rows.push_back(std::move(row));
        }
    }
    emit(doc, rows, opts.format);
    return 0;
}

struct GalleryOpts {
    std::string specs_dir = "specs";
    std::string format = "table";
};

struct GalleryRow {
    std::string example;
    std::string status;
    std::string detail;
};

GalleryRow check_two_state_drift(const ParsedChain& chain) {
    const StochasticKernel& q = *chain.kernel;
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();
    const SupportSet a = set_from_selector(chain, space, "A");
    const double pre_mass = m.mass(preimage(q, a));
    const double push_mass = pushforward(q, m).mass(a);
    const bool ok = std::abs(pre_mass - 1.0) <= 1e-12 && std::abs(push_mass - 0.4) <= 1e-12;
    std::ostringstream detail;
    detail << "m(Q^-1 A) = " << pre_mass << ", (Qm)(A) = " << push_mass
           << (ok ? "" : " (expected 1 and 0.4)");
    return {chain.name, ok ? "PASS" : "FAIL", detail.str()};
}

GalleryRow check_absorbing_three_state(const ParsedChain& chain) {
    const StochasticKernel& q = *chain.kernel;
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();
    const SupportSet origin = set_from_selector(chain, space, "origin");
    const DivergenceVerdict v = series_main(q, m, origin);
    bool sums_zero = !v.diverges;
    for (double s : v.partial_sums) sums_zero = sums_zero && s == 0.0;
    const bool nonrec = !poincare_recurrent_set(q, origin).test(0);
    const bool ok = sums_zero && nonrec;
    return {chain.name, ok ? "PASS" : "FAIL",
            ok ? "return series identically zero, origin never returns"
               : "expected a zero return series and a nonrecurrent origin"};
}

GalleryRow check_jump_chain(const ParsedChain& chain) {
    const StochasticKernel& q = *chain.kernel;
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();
    const SupportSet a = set_from_selector(chain, space, "A");
    const DivergenceVerdict v = series_forward(q, m, a);
    const bool converges =
        !v.diverges && std::abs(v.partial_sums.back() - m.mass(a)) <= 1e-12;
    if (!converges)
        return {chain.name, "FAIL", "forward return series unexpectedly diverges"};
    return {chain.name, "DISCREPANCY-DOCUMENTED",
            "forward return series converges (sum = m(A)); the claimed divergence "
            "for every positive-mass set fails on this chain"};
}

GalleryRow check_split_chain(const ParsedChain& chain) {
    const StochasticKernel& q = *chain.kernel;
    const ReferenceMeasure m = chain.require_measure();
    const StateSpace& space = *q.space();
    const SupportSet a = set_from_selector(chain, space, "A");
    const SupportSet x1 = set_from_selector(chain, space, "X1");
    const SupportSet x2 = set_from_selector(chain, space, "X2");

    const bool prp = prp_check(q, m).holds;
    const DivergenceVerdict push = series_pushforward(q, m, a);
    const double sum = push.partial_sums.back();
    const bool sum_ok = !push.diverges && std::abs(sum - 0.25) <= 1e-9;
    const bool strong_ok =
        strong_recurrent_set(q, x1).none() && strong_recurrent_set(q, x2) == x2;
    const bool ok = prp && sum_ok && strong_ok;
    std::ostringstream detail;
    if (ok)
        detail << "recurrence property holds, sum (Q^n m)(A) = " << sum
               << ", strong recurrence empty on X1 and full on X2";
    else
        detail << "prp=" << prp << " sum=" << sum << " strong_ok=" << strong_ok;
    return {chain.name, ok ? "PASS" : "FAIL", detail.str()};
}

GalleryRow check_square_orbit_map(const ParsedChain& chain) {
    const PiecewiseMap& map = *chain.map;
    const OrbitResult orb = orbit_return_test(map, Rat(1), 0.1, 10000);
    const auto steps = classify_with_refinement(map, {10});
    const bool origin_unknown = steps[0].verdicts[0] == CellVerdict::Unknown;
    const bool confirmed = orb.returned_at.has_value() && *orb.returned_at == 1 && origin_unknown;
    if (!confirmed)
        return {chain.name, "FAIL", "expected an immediate return of the fixed point at 1"};
    return {chain.name, "DISCREPANCY-DOCUMENTED",
            "the fixed point 1 returns at t = 1 although the source text reports "
            "no recurrent points for this map"};
}

GalleryRow check_twin_basin_map(const ParsedChain& chain) {
    const PiecewiseMap& map = *chain.map;
    const OrbitResult from0 = orbit_return_test(map, Rat(0), 0.1, 10000);
    const OrbitResult from1 = orbit_return_test(map, Rat(1), 0.1, 10000);
    const bool orbits_ok = !from0.returned_at && !from1.returned_at &&
                           from0.min_distance >= 0.15 && from1.min_distance >= 0.15;
    const auto steps = classify_with_refinement(map, chain.refine);
    bool shrinking = true;
    for (std::size_t i = 1; i < steps.size(); ++i)
        shrinking = shrinking && steps[i].unknown_length < steps[i - 1].unknown_length;
    const bool ok = orbits_ok && shrinking;
    std::ostringstream detail;
    if (ok)
        detail << "orbits from 0 and 1 stay at distance >= " << std::min(from0.min_distance, from1.min_distance)
               << ", unknown length shrinks across refinements";
    else
        detail << "orbits_ok=" << orbits_ok << " shrinking=" << shrinking;
    return {chain.name, ok ? "PASS" : "FAIL", detail.str()};
}

GalleryRow check_swap_schedule(const ParsedChain& chain) {
    const KernelSchedule& sched = *chain.schedule;
    const StateSpace& space = *sched.space();
    const SupportSet a = set_from_selector(chain, space, "A");
    bool never_recurrent = true;
    for (long s = 0; s <= 16; ++s)
        never_recurrent = never_recurrent && !recurrent_at_start_time(sched, s, 0, a);
    return {chain.name, never_recurrent ? "PASS" : "FAIL",
            never_recurrent ? "x0 never returns to A from any start time s <= 16"
                            : "x0 unexpectedly returns for some start time"};
}

int run_gallery(const GalleryOpts& opts) {
    using Check = GalleryRow (*)(const ParsedChain&);
    const std::vector<std::pair<const char*, Check>> entries = {
        {"two_state_drift.json", check_two_state_drift},
        {"absorbing_three_state.json", check_absorbing_three_state},
        {"jump_chain.json", check_jump_chain},
        {"split_chain.json", check_split_chain},
        {"square_orbit_map.json", check_square_orbit_map},
        {"twin_basin_map.json", check_twin_basin_map},
        {"swap_schedule.json", check_swap_schedule},
    };

    std::vector<GalleryRow> results;
    for (const auto& [file, check] : entries) {
        const ParsedChain chain = parse_chain_spec(opts.specs_dir + "/" + file);
        results.push_back(check(chain));
    }

    int pass = 0, documented = 0, fail = 0;
    for (const auto& r : results) {
        if (r.status == "PASS") ++pass;
        else if (r.status == "FAIL") ++fail;
        else ++documented;
    }

    if (opts.format == "table") {
        std::printf("%-24s %-26s %s\n", "example", "status", "detail");
        for (const auto& r : results)
            std::printf("%-24s %-26s %s\n", r.example.c_str(), r.status.c_str(),
                        r.detail.c_str());
        std::printf("\n%zu examples: %d PASS, %d DISCREPANCY-DOCUMENTED, %d FAIL\n",
                    results.size(), pass, documented, fail);
    } else {
        Json doc = report_envelope("gallery", opts.specs_dir);
        Json rows = Json::array();
        for (const auto& r : results) {
            Json row;
            row["example"] = r.example;
            row["status"] = r.status;
            row["detail"] = r.detail;
            rows.push_back(std::move(row));
        }
        doc["examples"] = rows;
        doc["pass"] = pass;
        doc["discrepancy_documented"] = documented;
        doc["fail"] = fail;
        emit(doc, rows, opts.format);
    }
    return fail == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact recurrence analysis for finite Markov chains and interval maps"};
    app.require_subcommand(1);

    AnalyzeOpts an;
    VerifyOpts ve;
    SimulateOpts si;
    DiscretizeOpts di;
    MultirecOpts mu;
    GalleryOpts ga;
    double an_gamma = 0, ve_gamma = 0, si_gamma = 0, mu_gamma = 0;
    long mu_n_max = 0;

    auto* analyze = app.add_subcommand("analyze", "Recurrence report for the sets of a chain");
    analyze->add_option("-i,--input", an.input, "chain description file")->required();
    analyze->add_option("--sets", an.sets,
                        "named sets, labels, '+'-joined unions, or ALL_SUBSETS "
                        "(default: file sets)")
        ->delimiter(',');
    analyze->add_option("--format", an.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* an_g = analyze->add_option("--gamma", an_gamma, "time step for generator chains");
    analyze->add_option("--refine", an.refine, "grid resolutions for map chains")
        ->delimiter(',');
    analyze->add_option("--x0", an.orbit_starts, "orbit start points for map chains (exact)");
    analyze->add_option("--eps", an.eps, "orbit return radius");
    analyze->add_option("--t-max", an.t_max, "orbit step bound");
    analyze->add_option("--start-times", an.start_times,
                        "start times to check for inhomogeneous schedules");

    auto* verify = app.add_subcommand("verify", "Check the recurrence equivalences on a chain");
    verify->add_option("-i,--input", ve.input, "chain description file")->required();
    verify->add_option("--theorem", ve.theorems, "1 = series equivalence, 2 = pointwise, 3 = conservativity")
        ->delimiter(',');
    verify->add_option("--format", ve.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* ve_g = verify->add_option("--gamma", ve_gamma, "time step for generator chains");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo return estimates vs exact values");
    simulate->add_option("-i,--input", si.input, "chain description file")->required();
    simulate->add_option("--sets", si.sets, "target sets (default: file sets)")->delimiter(',');
    simulate->add_option("--x0", si.x0, "start state label (default: first state)");
    simulate->add_option("-t,--horizon", si.horizon, "return horizon");
    simulate->add_option("--trials", si.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", si.seed, "RNG seed");
    simulate->add_option("--format", si.format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* si_g = simulate->add_option("--gamma", si_gamma, "time step for generator chains");

    auto* discretize = app.add_subcommand("discretize", "Grid kernels and cell verdicts for a map");
    discretize->add_option("-i,--input", di.input, "chain description file")->required();
    discretize->add_option("--refine", di.refine, "grid resolutions (default: file refine list)")
        ->delimiter(',');
    discretize->add_flag("--matrix", di.with_matrix, "embed the grid kernels in the report");
    discretize->add_option("--format", di.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* multirec = app.add_subcommand("multirec", "Common return times for k-fold returns");
    multirec->add_option("-i,--input", mu.input, "chain description file")->required();
    multirec->add_option("--sets", mu.sets, "target sets (default: file sets)")->delimiter(',');
    multirec->add_option("--k", mu.ks, "number of consecutive returns (default 2)")
        ->delimiter(',');
    auto* mu_n = multirec->add_option("--n-max", mu_n_max, "cap the searched return time");
    multirec->add_option("--format", mu.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* mu_g = multirec->add_option("--gamma", mu_gamma, "time step for generator chains");

    auto* gallery = app.add_subcommand("gallery", "Run the bundled examples against their documented behavior");
    gallery->add_option("--specs-dir", ga.specs_dir, "directory holding the bundled files");
    gallery->add_option("--format", ga.format, "table, json, or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));

    int rc = 0;
    analyze->callback([&] {
        if (an_g->count()) an.gamma = an_gamma;
        rc = run_analyze(an);
    });
    verify->callback([&] {
        if (ve_g->count()) ve.gamma = ve_gamma;
        rc = run_verify(ve);
    });
    simulate->callback([&] {
        if (si_g->count()) si.gamma = si_gamma;
        rc = run_simulate(si);
    });
    discretize->callback([&] { rc = run_discretize(di); });
    multirec->callback([&] {
        if (mu_g->count()) mu.gamma = mu_gamma;
        if (mu_n->count()) mu.n_max = mu_n_max;
        rc = run_multirec(mu);
    });
    gallery->callback([&] { rc = run_gallery(ga); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int cli_rc = app.exit(e);
        return cli_rc == 0 ? 0 : 2;
    } catch (const chainrec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
