#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "chainrec/chain_spec.hpp"
#include "chainrec/errors.hpp"
#include "chainrec/grid.hpp"
#include "chainrec/multirec.hpp"
#include "chainrec/recurrence.hpp"
#include "chainrec/series.hpp"
#include "chainrec/set_dynamics.hpp"
#include "chainrec/sim.hpp"

namespace py = pybind11;
using namespace chainrec;

namespace {

SupportSet as_set(int n, const std::vector<int>& indices) {
    SupportSet s(n);
    for (int i : indices) {
        if (i < 0 || i >= n)
            throw py::index_error("state index " + std::to_string(i) + " out of range");
        s.set(i);
    }
    return s;
}

py::list set_to_list(const SupportSet& s) {
    py::list out;
    for (int i : s.indices()) out.append(i);
    return out;
}

py::dict verdict_dict(const DivergenceVerdict& v) {
    py::dict d;
    const char* kind = v.kind == SeriesKind::PreimageReturn   ? "return"
                       : v.kind == SeriesKind::ForwardReturn ? "forward_return"
                                                              : "pushforward";
    d["series"] = kind;
    d["diverges"] = v.diverges;
    d["trace_preperiod"] = v.trace_preperiod;
    d["trace_period"] = v.trace_period;
    d["partial_sums"] = v.partial_sums;
    d["witness"] = v.witness;
    return d;
}

py::dict property_dict(const PropertyVerdict& v) {
    py::dict d;
    d["property"] = v.property;
    d["holds"] = v.holds;
    d["witness"] = v.witness ? py::object(set_to_list(*v.witness)) : py::object(py::none());
    d["family_restricted"] = v.family_restricted;
    d["detail"] = v.detail;
    return d;
}

py::dict theorem_dict(const TheoremReport& r) {
    py::dict d;
    d["theorem"] = r.theorem;
    d["holds"] = r.holds;
    d["detail"] = r.detail;
    py::list parts;
    for (const auto& p : r.parts) parts.append(property_dict(p));
    d["parts"] = parts;
    return d;
}

py::dict report_dict(const RecurrenceReport& r) {
    py::dict d;
    d["set"] = set_to_list(r.set_a);
    d["recurrent"] = set_to_list(r.recurrent);
    d["nonrecurrent"] = set_to_list(r.nonrecurrent);
    d["strong_recurrent"] = set_to_list(r.strong_recurrent);
    d["nonrecurrent_mass"] = r.nonrecurrent_mass;
    return d;
}

py::dict multirec_dict(const MultiRecResult& r) {
    py::dict d;
    d["k"] = r.k;
    d["found_n"] = r.found_n ? py::object(py::cast(*r.found_n)) : py::object(py::none());
    d["mass"] = r.mass;
    d["searched_bound"] = r.searched_bound;
    d["exhaustive"] = r.exhaustive;
    return d;
}

py::dict orbit_dict(const OrbitResult& r) {
    py::dict d;
    d["returned_at"] = r.returned_at ? py::object(py::cast(*r.returned_at)) : py::object(py::none());
    d["min_distance"] = r.min_distance;
    d["steps"] = r.steps;
    d["exact_steps"] = r.exact_steps;
    return d;
}

py::dict estimate_dict(const ReturnProbEstimate& e) {
    py::dict d;
    d["estimate"] = e.estimate;
    d["wilson_lo"] = e.wilson_lo;
    d["wilson_hi"] = e.wilson_hi;
    d["trials"] = e.trials;
    d["hits"] = e.hits;
    return d;
}

std::vector<std::string> space_labels(const StateSpacePtr& space) { return space->labels(); }

StateSpacePtr space_for(int n, const std::optional<std::vector<std::string>>& labels) {
    return labels ? StateSpace::labeled(*labels) : StateSpace::indexed(n);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact recurrence analysis for finite Markov chains and interval maps";

    auto chain_error = py::register_exception<Error>(m, "ChainError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", chain_error.ptr());

    py::class_<StochasticKernel>(m, "StochasticKernel")
        .def_property_readonly("size", &StochasticKernel::size)
        .def_property_readonly("labels",
                               [](const StochasticKernel& q) { return space_labels(q.space()); })
        .def_property_readonly("support_underflow", &StochasticKernel::support_underflow)
        .def("prob", &StochasticKernel::prob, py::arg("i"), py::arg("j"))
        .def("supports", &StochasticKernel::supports, py::arg("i"), py::arg("j"))
        .def("row",
             [](const StochasticKernel& q, int i) {
                 std::vector<double> out(q.size());
                 for (int j = 0; j < q.size(); ++j) out[j] = q.prob(i, j);
                 return out;
             },
             py::arg("i"))
        .def("row_support",
             [](const StochasticKernel& q, int i) { return set_to_list(q.row_support(i)); },
             py::arg("i"))
        .def("__repr__", [](const StochasticKernel& q) {
            return "<StochasticKernel on " + std::to_string(q.size()) + " states>";
        });

    py::class_<ReferenceMeasure>(m, "ReferenceMeasure")
        .def_static("uniform", &ReferenceMeasure::uniform, py::arg("n"))
        .def_static("from_weights", &ReferenceMeasure::from_weights, py::arg("weights"))
        .def_property_readonly("size", &ReferenceMeasure::size)
        .def_property_readonly("weights", &ReferenceMeasure::weights)
        .def_property_readonly("total", &ReferenceMeasure::total)
        .def("weight", &ReferenceMeasure::weight, py::arg("i"))
        .def("mass",
             [](const ReferenceMeasure& mm, const std::vector<int>& a) {
                 return mm.mass(as_set(mm.size(), a));
             },
             py::arg("indices"))
        .def("atoms", [](const ReferenceMeasure& mm) { return set_to_list(mm.atoms()); });

    py::class_<GeneratorMatrix>(m, "GeneratorMatrix")
        .def_property_readonly("size", &GeneratorMatrix::size)
        .def("rate", &GeneratorMatrix::rate, py::arg("i"), py::arg("j"));

    py::class_<KernelSchedule>(m, "KernelSchedule")
        .def_property_readonly("size", &KernelSchedule::size)
        .def_property_readonly("labels",
                               [](const KernelSchedule& s) { return space_labels(s.space()); })
        .def_property_readonly("head_length", &KernelSchedule::head_length)
        .def_property_readonly("tail_period", &KernelSchedule::tail_period)
        .def_property_readonly("homogeneous", &KernelSchedule::is_homogeneous)
        .def("at", &KernelSchedule::at, py::arg("s"),
             py::return_value_policy::copy);

    py::class_<PiecewiseMap>(m, "PiecewiseMap")
        .def("apply",
             [](const PiecewiseMap& t, const std::string& x) {
                 return t.apply(parse_rational(x)).get_str();
             },
             py::arg("x"), "Exact image of an exact rational, as a p/q string.")
        .def("apply_float",
             [](const PiecewiseMap& t, double x) { return t.apply(Rat(x)).get_d(); },
             py::arg("x"));

    py::class_<ParsedChain>(m, "ParsedChain")
        .def_readonly("name", &ParsedChain::name)
        .def_property_readonly("kind",
                               [](const ParsedChain& c) {
                                   switch (c.kind) {
                                       case ChainKind::Kernel: return "kernel";
                                       case ChainKind::Generator: return "generator";
                                       case ChainKind::Schedule: return "schedule";
                                       case ChainKind::Map: return "map";
                                   }
                                   return "?";
                               })
        .def_property_readonly("labels",
                               [](const ParsedChain& c) -> py::object {
                                   if (!c.space) return py::none();
                                   return py::cast(space_labels(c.space));
                               })
        .def_readonly("named_sets", &ParsedChain::named_sets)
        .def_readonly("gamma", &ParsedChain::gamma)
        .def_readonly("refine", &ParsedChain::refine)
        .def_property_readonly("map",
                               [](const ParsedChain& c) -> py::object {
                                   if (!c.map) return py::none();
                                   return py::cast(*c.map);
                               })
        .def("require_kernel", &ParsedChain::require_kernel,
             py::arg("gamma") = std::nullopt)
        .def("as_schedule", &ParsedChain::as_schedule, py::arg("gamma") = std::nullopt)
        .def("require_measure", &ParsedChain::require_measure);

    m.def("parse_chain_spec", &parse_chain_spec, py::arg("path"));
    m.def("parse_chain_spec_text", &parse_chain_spec_text, py::arg("text"),
          py::arg("origin") = "inline");
    m.def("parse_rational",
          [](const std::string& text) { return parse_rational(text).get_str(); },
          py::arg("text"));

    m.def("make_kernel",
          [](const std::vector<std::vector<double>>& rows,
             std::optional<std::vector<std::string>> labels) {
              return validate_kernel(space_for(static_cast<int>(rows.size()), labels), rows);
          },
          py::arg("rows"), py::arg("labels") = std::nullopt);
    m.def("kernel_from_map",
          [](const std::vector<int>& image_of, std::optional<std::vector<std::string>> labels) {
              return kernel_from_map(space_for(static_cast<int>(image_of.size()), labels),
                                     image_of);
          },
          py::arg("image_of"), py::arg("labels") = std::nullopt);
    m.def("make_generator",
          [](const std::vector<std::vector<double>>& rows,
             std::optional<std::vector<std::string>> labels) {
              return validate_generator(space_for(static_cast<int>(rows.size()), labels), rows);
          },
          py::arg("rows"), py::arg("labels") = std::nullopt);
    m.def("kernel_from_generator",
          [](const GeneratorMatrix& g, double gamma) { return kernel_from_generator(g, gamma); },
          py::arg("generator"), py::arg("gamma"));
    m.def("make_schedule",
          [](const std::vector<std::vector<std::vector<double>>>& tail,
             std::optional<std::vector<std::vector<std::vector<double>>>> head,
             std::optional<std::vector<std::string>> labels) {
              if (tail.empty()) throw Error("schedule needs a nonempty tail");
              const auto space = space_for(static_cast<int>(tail[0].size()), labels);
              std::vector<StochasticKernel> h, t;
              if (head)
                  for (const auto& rows : *head) h.push_back(validate_kernel(space, rows));
              for (const auto& rows : tail) t.push_back(validate_kernel(space, rows));
              return KernelSchedule(std::move(h), std::move(t));
          },
          py::arg("tail"), py::arg("head") = std::nullopt, py::arg("labels") = std::nullopt);

    m.def("compose", &compose, py::arg("a"), py::arg("b"));
    m.def("kernel_power", &kernel_power, py::arg("kernel"), py::arg("t"));
    m.def("pushforward", &pushforward, py::arg("kernel"), py::arg("measure"));
    m.def("preimage",
          [](const StochasticKernel& q, const std::vector<int>& b) {
              return set_to_list(preimage(q, as_set(q.size(), b)));
          },
          py::arg("kernel"), py::arg("b"));
    m.def("image",
          [](const StochasticKernel& q, const std::vector<int>& a) {
              return set_to_list(image(q, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("a"));

    m.def("poincare_recurrent_set",
          [](const StochasticKernel& q, const std::vector<int>& a) {
              return set_to_list(poincare_recurrent_set(q, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("a"));
    m.def("strong_recurrent_set",
          [](const StochasticKernel& q, const std::vector<int>& a) {
              return set_to_list(strong_recurrent_set(q, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("a"));
    m.def("topologically_recurrent_points",
          [](const StochasticKernel& q) { return set_to_list(topologically_recurrent_points(q)); },
          py::arg("kernel"));
    m.def("metrically_recurrent_points",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return set_to_list(metrically_recurrent_points(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("recurrence_report",
          [](const StochasticKernel& q, const ReferenceMeasure& mm, const std::vector<int>& a) {
              return report_dict(recurrence_report(q, mm, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("measure"), py::arg("a"));

    m.def("series_main",
          [](const StochasticKernel& q, const ReferenceMeasure& mm, const std::vector<int>& a) {
              return verdict_dict(series_main(q, mm, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("measure"), py::arg("a"));
    m.def("series_forward",
          [](const StochasticKernel& q, const ReferenceMeasure& mm, const std::vector<int>& a) {
              return verdict_dict(series_forward(q, mm, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("measure"), py::arg("a"));
    m.def("series_pushforward",
          [](const StochasticKernel& q, const ReferenceMeasure& mm, const std::vector<int>& a) {
              return verdict_dict(series_pushforward(q, mm, as_set(q.size(), a)));
          },
          py::arg("kernel"), py::arg("measure"), py::arg("a"));

    auto family_from = [](const StochasticKernel& q,
                          const std::optional<std::vector<std::vector<int>>>& sets) {
        if (!sets) return SetFamily::all_subsets();
        std::vector<SupportSet> fam;
        for (const auto& v : *sets) fam.push_back(as_set(q.size(), v));
        return SetFamily::of(std::move(fam));
    };
    m.def("prp_check",
          [family_from](const StochasticKernel& q, const ReferenceMeasure& mm,
                        std::optional<std::vector<std::vector<int>>> sets) {
              return property_dict(prp_check(q, mm, family_from(q, sets)));
          },
          py::arg("kernel"), py::arg("measure"), py::arg("sets") = std::nullopt);
    m.def("return_series_check",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return property_dict(return_series_check(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("forward_series_check",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return property_dict(forward_series_check(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("pushforward_series_check",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return property_dict(pushforward_series_check(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("cons_forward_check",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return property_dict(cons_forward_check(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("cons_backward_check",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return property_dict(cons_backward_check(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));

    m.def("verify_recurrence_equivalence",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return theorem_dict(verify_recurrence_equivalence(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("verify_pointwise_recurrence",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return theorem_dict(verify_pointwise_recurrence(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("verify_conservativity",
          [](const StochasticKernel& q, const ReferenceMeasure& mm) {
              return theorem_dict(verify_conservativity(q, mm));
          },
          py::arg("kernel"), py::arg("measure"));
    m.def("recurrent_at_start_time",
          [](const KernelSchedule& s, long start, int x, const std::vector<int>& a) {
              return recurrent_at_start_time(s, start, x, as_set(s.size(), a));
          },
          py::arg("schedule"), py::arg("start_time"), py::arg("x"), py::arg("a"));

    m.def("multiple_return_probe",
          [](const StochasticKernel& q, const ReferenceMeasure& mm, const std::vector<int>& a,
             int k, std::optional<long> n_max) {
              return multirec_dict(multiple_return_probe(q, mm, as_set(q.size(), a), k, n_max));
          },
          py::arg("kernel"), py::arg("measure"), py::arg("a"), py::arg("k"),
          py::arg("n_max") = std::nullopt);

    m.def("orbit_return_test",
          [](const PiecewiseMap& t, const std::string& x0, double eps, long t_max) {
              return orbit_dict(orbit_return_test(t, parse_rational(x0), eps, t_max));
          },
          py::arg("map"), py::arg("x0"), py::arg("eps"), py::arg("t_max"));
    m.def("discretize_map",
          [](const PiecewiseMap& t, int n) {
              const GridKernelPair pair = discretize_map(t, n);
              py::dict d;
              d["cells"] = n;
              d["labels"] = space_labels(pair.space);
              d["outer"] = pair.outer;
              py::list inner;
              for (const auto& row : pair.inner_support) inner.append(set_to_list(row));
              d["inner_support"] = inner;
              return d;
          },
          py::arg("map"), py::arg("n_cells"));
    m.def("classify_with_refinement",
          [](const PiecewiseMap& t, const std::vector<int>& resolutions) {
              py::list out;
              for (const auto& step : classify_with_refinement(t, resolutions)) {
                  py::dict d;
                  d["cells"] = step.n_cells;
                  py::list verdicts;
                  for (auto v : step.verdicts)
                      verdicts.append(v == CellVerdict::Unknown ? "unknown"
                                                                : "certain_nonrecurrent");
                  d["verdicts"] = verdicts;
                  d["unknown_length"] = step.unknown_length;
                  out.append(d);
              }
              return out;
          },
          py::arg("map"), py::arg("resolutions"));

    m.def("sample_path",
          [](const KernelSchedule& s, int x0, long horizon, std::uint64_t seed) {
              return sample_path(s, x0, horizon, seed).states;
          },
          py::arg("schedule"), py::arg("x0"), py::arg("horizon"), py::arg("seed"));
    m.def("exact_return_prob",
          [](const KernelSchedule& s, int x, const std::vector<int>& a, long t_max) {
              return exact_return_prob(s, x, as_set(s.size(), a), t_max);
          },
          py::arg("schedule"), py::arg("x"), py::arg("a"), py::arg("t_max"));
    m.def("estimate_return_prob",
          [](const KernelSchedule& s, int x, const std::vector<int>& a, long t_max, long trials,
             std::uint64_t seed) {
              return estimate_dict(estimate_return_prob(s, x, as_set(s.size(), a), t_max,
                                                        trials, seed));
          },
          py::arg("schedule"), py::arg("x"), py::arg("a"), py::arg("t_max"), py::arg("trials"),
          py::arg("seed"));
}
