// Python entry points. Structured results cross the boundary as JSON text
// and are decoded with the standard json module, so the Python side sees
// plain dicts with the same layout as the CLI reports.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wdds/optimizer.hpp"
#include "wdds/seastates.hpp"

namespace py = pybind11;
using namespace wdds;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::handle& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

ParameterSet params_arg(const std::optional<std::string>& path) {
  return path ? load_params(*path) : default_params();
}

DesignVector design_arg(const py::object& d) {
  if (d.is_none()) return nominal_design();
  if (py::isinstance<py::str>(d)) {
    const auto s = d.cast<std::string>();
    if (s == "nominal") return nominal_design();
    if (s == "reference") return reference_initial_design();
    throw ConfigError("design: expected a dict, 'nominal' or 'reference'");
  }
  return design_from_json(from_py(d));
}

EvalContext context_arg(const std::optional<std::string>& params, std::optional<double> hs,
                        std::optional<double> tp, std::uint64_t seed, const std::string& spectrum,
                        const std::optional<std::string>& hydro_file) {
  const auto p = params_arg(params);
  const SeaState sea{hs.value_or(p.general.hs), tp.value_or(p.general.tp)};
  auto ctx = make_context(p, sea, seed, parse_spectrum_mode(spectrum));
  if (hydro_file) use_imported_coefficients(ctx, load_coefficients(*hydro_file));
  return ctx;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wave-driven desalination co-design core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<HydroFormatError>(m, "HydroFormatError", PyExc_ValueError);
  py::register_exception<NdbcFormatError>(m, "NdbcFormatError", PyExc_ValueError);

  m.def(
      "load_params",
      [](const std::optional<std::string>& path) { return to_py(params_to_json(params_arg(path))); },
      py::arg("path") = py::none(),
      "Parameter set as a dict in SI units; the bundled defaults when path is None.");

  m.def(
      "params_checksum",
      [](const std::optional<std::string>& path) { return params_checksum(params_arg(path)); },
      py::arg("path") = py::none());

  m.def("nominal_design", [] { return to_py(design_to_json(nominal_design())); });
  m.def("reference_design", [] { return to_py(design_to_json(reference_initial_design())); });
  m.def("design_bounds", [] {
    py::dict out;
    for (std::size_t i = 0; i < DesignVector::size; ++i) {
      out[py::str(std::string(kDesignNames[i]))] =
          py::make_tuple(kDesignBounds[i].lo, kDesignBounds[i].hi);
    }
    return out;
  });

  m.def(
      "evaluate",
      [](const py::object& design, std::optional<double> hs, std::optional<double> tp,
         std::uint64_t seed, const std::optional<std::string>& params, const std::string& spectrum,
         const std::optional<std::string>& hydro_file) {
        const auto d = design_arg(design);
        const auto ctx = context_arg(params, hs, tp, seed, spectrum, hydro_file);
        nlohmann::json j;
        {
          py::gil_scoped_release release;
          j = evaluation_to_json(evaluate(d, ctx));
        }
        return to_py(j);
      },
      py::arg("design") = py::none(), py::arg("hs") = py::none(), py::arg("tp") = py::none(),
      py::arg("seed") = 1, py::arg("params") = py::none(), py::arg("spectrum") = "standard",
      py::arg("hydro_file") = py::none(),
      "Full pipeline pass for one design; returns the evaluation report.");

  m.def(
      "optimize",
      [](const std::string& workflow, int pop, int gens, std::uint64_t seed, int jobs,
         std::optional<double> hs, std::optional<double> tp,
         const std::optional<std::string>& params) {
        const auto ctx = context_arg(params, hs, tp, seed, "standard", std::nullopt);
        GaConfig cfg;
        cfg.population_size = pop;
        cfg.max_generations = gens;
        cfg.immigrant_count = (3 * pop) / 4;
        cfg.seed = seed;
        cfg.jobs = jobs;
        cfg.validate();
        OptimizationReport r;
        {
          py::gil_scoped_release release;
          if (workflow == "mdo") {
            r = run_mdo(ctx, cfg);
          } else if (workflow == "sdo-a") {
            r = run_sdo_a(ctx, cfg);
          } else if (workflow == "sdo-b") {
            r = run_sdo_b(ctx, cfg);
          } else {
            throw ConfigError("workflow must be mdo, sdo-a or sdo-b");
          }
        }
        return to_py(report_to_json(r));
      },
      py::arg("workflow") = "mdo", py::arg("pop") = 400, py::arg("gens") = 400,
      py::arg("seed") = 1, py::arg("jobs") = 1, py::arg("hs") = py::none(),
      py::arg("tp") = py::none(), py::arg("params") = py::none(),
      "Runs a GA workflow and returns the optimization report.");

  m.def(
      "size_plant",
      [](double qpmax_per_day, const std::optional<std::string>& params) {
        const auto pl = size_plant(qpmax_per_day, params_arg(params));
        py::dict d;
        d["Qpmax"] = pl.Qpmax;
        d["A_m"] = pl.A_m;
        d["R_m"] = pl.R_m;
        d["delta_pi"] = pl.delta_pi;
        d["P_relief"] = pl.P_relief;
        d["R_t"] = pl.R_t;
        d["eta_RO"] = pl.eta_RO;
        return d;
      },
      py::arg("qpmax_per_day"), py::arg("params") = py::none(),
      "Membrane plant sized for a permeate capacity in m^3/day (results SI).");

  m.def(
      "pm_spectrum",
      [](double hs, double tp, double omega, const std::string& mode) {
        return pm_spectrum({hs, tp}, omega, parse_spectrum_mode(mode));
      },
      py::arg("hs"), py::arg("tp"), py::arg("omega"), py::arg("mode") = "standard");

  m.def("mesh_resolution", [](double w, double t, double h) {
    const auto r = mesh_resolution(w, t, h);
    return py::make_tuple(r.n_surge, r.n_sway, r.n_heave);
  });

  m.def(
      "surrogate_coefficients",
      [](const py::object& design, const std::optional<std::string>& params) {
        const auto p = params_arg(params);
        const auto g = build_geometry(design_arg(design), p);
        const auto ctx = make_context(p, {p.general.hs, p.general.tp}, 1);
        return to_py(coefficients_to_json(coefficients_for(g, ctx)));
      },
      py::arg("design") = py::none(), py::arg("params") = py::none(),
      "Surrogate hydrodynamic coefficients in the import file layout.");

  m.def(
      "kmeans",
      [](const std::vector<std::pair<double, double>>& points, std::size_t k, std::uint64_t seed) {
        std::vector<SeaPoint> pts;
        pts.reserve(points.size());
        for (const auto& [tp, hs] : points) pts.push_back({tp, hs});
        const auto c = kmeans(pts, k, seed);
        py::list centers;
        for (const auto& p : c.centers) centers.append(py::make_tuple(p.Tp, p.Hs));
        py::dict d;
        d["centers"] = centers;
        d["weights"] = c.weights;
        d["labels"] = c.labels;
        d["inertia"] = c.inertia;
        d["inertia_history"] = c.inertia_history;
        d["monotone"] = c.monotone;
        d["collapsed"] = c.collapsed;
        return d;
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 1,
      "k-means++ on (Tp, Hs) pairs.");

  m.def(
      "parse_ndbc",
      [](const std::string& text, const std::string& station) {
        const auto r = parse_ndbc(text, station);
        py::list obs;
        for (const auto& o : r.observations) obs.append(py::make_tuple(o.timestamp, o.Hs, o.Tp));
        py::dict ledger;
        ledger["data_rows"] = r.ledger.data_rows;
        ledger["kept"] = r.ledger.kept;
        ledger["sentinel"] = r.ledger.sentinel;
        ledger["missing"] = r.ledger.missing;
        ledger["nonpositive"] = r.ledger.nonpositive;
        py::dict d;
        d["observations"] = obs;
        d["ledger"] = ledger;
        return d;
      },
      py::arg("text"), py::arg("station") = "");
}
