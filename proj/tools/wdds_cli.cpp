// Command-line front end. Exit codes: 0 success, 1 runtime failure, 2 bad
// configuration or arguments.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wdds/optimizer.hpp"
#include "wdds/seastates.hpp"

namespace fs = std::filesystem;
using namespace wdds;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string params = "default";
  double hs = -1;
  double tp = -1;
  std::uint64_t seed = 1;
  std::string spectrum = "standard";
  std::string hydro_file;
  std::string intake;
  std::string cost_curves;
};

struct GaOptions {
  int pop = 400;
  int gens = 400;
  double mutation = 0.2;
  double crossover = 0.8;
  int elites = 1;
  int tournament = 2;
  int interval = 50;
  int immigrants = -1;  // 75% of the population unless given
  int jobs = 1;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--params", o.params, "Parameter file, or 'default'");
  app->add_option("--hs", o.hs, "Significant wave height [m]; defaults to the parameter set");
  app->add_option("--tp", o.tp, "Peak period [s]; defaults to the parameter set");
  app->add_option("--seed", o.seed, "Seed for the wave realization and the GA");
  app->add_option("--spectrum", o.spectrum, "standard | verbatim")
      ->check(CLI::IsMember({"standard", "verbatim"}));
  app->add_option("--hydro-file", o.hydro_file,
                  "Import hydrodynamic coefficients instead of the surrogate");
  app->add_option("--intake", o.intake, "band | wedgewire | microscreen")
      ->check(CLI::IsMember({"band", "wedgewire", "microscreen"}));
  app->add_option("--cost-curves", o.cost_curves, "SWRO cost-curve file");
}

void add_ga(CLI::App* app, GaOptions& g) {
  app->add_option("--pop", g.pop, "Population size");
  app->add_option("--gens", g.gens, "Generations, counting the initial one");
  app->add_option("--mutation", g.mutation, "Per-individual mutation probability");
  app->add_option("--crossover", g.crossover, "Crossover probability");
  app->add_option("--elites", g.elites, "Elites kept each generation");
  app->add_option("--tournament", g.tournament, "Tournament size");
  app->add_option("--immigration-interval", g.interval, "Generations between immigrations");
  app->add_option("--immigrants", g.immigrants, "Individuals replaced per immigration");
  app->add_option("--jobs", g.jobs, "Worker threads; results do not depend on it");
}

ParameterSet read_params(const CommonOptions& o) {
  ParameterSet p = o.params == "default" ? default_params() : load_params(o.params);
  if (!o.intake.empty()) p.econ.intake = parse_intake(o.intake);
  return p;
}

SeaState sea_from(const CommonOptions& o, const ParameterSet& p) {
  SeaState s{o.hs > 0 ? o.hs : p.general.hs, o.tp > 0 ? o.tp : p.general.tp};
  if (o.hs == 0 || o.tp == 0 || !(s.Hs > 0) || !(s.Tp > 0)) {
    throw ConfigError("sea state: Hs and Tp must be positive");
  }
  return s;
}

EvalContext build_context(const CommonOptions& o) {
  const auto p = read_params(o);
  auto ctx = make_context(p, sea_from(o, p), o.seed, parse_spectrum_mode(o.spectrum));
  if (!o.cost_curves.empty()) ctx.curves = load_swro_curves(o.cost_curves);
  if (!o.hydro_file.empty()) use_imported_coefficients(ctx, load_coefficients(o.hydro_file));
  return ctx;
}

GaConfig ga_config(const GaOptions& g, std::uint64_t seed) {
  GaConfig c;
  c.population_size = g.pop;
  c.max_generations = g.gens;
  c.mutation_rate = g.mutation;
  c.crossover_rate = g.crossover;
  c.elites = g.elites;
  c.tournament_size = g.tournament;
  c.immigration_interval = g.interval;
  c.immigrant_count = g.immigrants >= 0 ? g.immigrants : (3 * g.pop) / 4;
  c.seed = seed;
  c.jobs = g.jobs;
  c.validate();
  return c;
}

DesignVector read_design(const std::string& spec) {
  if (spec == "nominal") return nominal_design();
  if (spec == "reference") return reference_initial_design();
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open design file '" + spec + "'");
  try {
    auto j = nlohmann::json::parse(in);
    if (j.contains("design")) j = j.at("design");
    return design_from_json(j);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("design file '" + spec + "': " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

std::string history_text(const std::vector<HistoryRow>& h) {
  std::ostringstream s;
  write_history_csv(h, s);
  return s.str();
}

void write_report_dir(const fs::path& dir, const OptimizationReport& r) {
  fs::create_directories(dir);
  write_json(dir / "report.json", report_to_json(r));
  if (r.stages.size() == 1) {
    write_text(dir / "history.csv", history_text(r.stages.front().history));
  } else {
    for (std::size_t i = 0; i < r.stages.size(); ++i) {
      write_text(dir / ("history_stage" + std::to_string(i + 1) + "_" + r.stages[i].name + ".csv"),
                 history_text(r.stages[i].history));
    }
  }
}

void print_summary(const OptimizationReport& r) {
  auto lcow = [](double v) { return std::isfinite(v) ? std::to_string(v) : std::string("n/a"); };
  std::cout << r.workflow << ": best LCOW " << lcow(r.best.lcow) << " $/m^3"
            << (r.best.feasible ? "" : " (infeasible)") << ", nominal " << lcow(r.nominal.lcow)
            << " $/m^3\n";
}

std::vector<int> parse_years(const std::string& s) {
  std::vector<int> years;
  const auto dash = s.find('-');
  try {
    if (dash == std::string::npos) {
      years.push_back(std::stoi(s));
    } else {
      const int a = std::stoi(s.substr(0, dash)), b = std::stoi(s.substr(dash + 1));
      if (b < a) throw ConfigError("years: range is reversed");
      for (int y = a; y <= b; ++y) years.push_back(y);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("years: expected YYYY or YYYY-YYYY, got '" + s + "'");
  }
  return years;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-driven desalination co-design toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  GaOptions ga;

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate one design");
  add_common(evaluate_cmd, common);
  std::string design_spec = "nominal";
  std::string out_path;
  std::string timeseries_path;
  std::string export_coeffs;
  evaluate_cmd->add_option("--design", design_spec, "Design JSON file, 'nominal' or 'reference'");
  evaluate_cmd->add_option("--out", out_path, "Report file (stdout when omitted)");
  evaluate_cmd->add_option("--dump-timeseries", timeseries_path, "Write the time series CSV");
  evaluate_cmd->add_option("--export-coefficients", export_coeffs,
                           "Write the hydrodynamic coefficients used for this design");

  std::string out_dir;
  auto* optimize_cmd = app.add_subcommand("optimize", "Co-design (all variables at once)");
  auto* sdo_a_cmd = app.add_subcommand("sdo-a", "Sequential: WEC, then PTO for LCOF, then plant");
  auto* sdo_b_cmd = app.add_subcommand("sdo-b", "Sequential: WEC, then plant, then PTO");
  for (auto* cmd : {optimize_cmd, sdo_a_cmd, sdo_b_cmd}) {
    add_common(cmd, common);
    add_ga(cmd, ga);
    cmd->add_option("--out", out_dir, "Output directory")->required();
  }

  auto* sens_cmd = app.add_subcommand("sensitivity", "Co-design for every sea state of a set");
  add_common(sens_cmd, common);
  add_ga(sens_cmd, ga);
  std::string seastates_path;
  sens_cmd->add_option("--seastates", seastates_path, "Sea-state set (wdds-seastates/1)")
      ->required();
  sens_cmd->add_option("--out", out_dir, "Output directory")->required();

  auto* cluster_cmd = app.add_subcommand("cluster-seastates", "Two-level k-means of buoy data");
  std::string stations = "52200,51206,46221,41053,44011";
  std::string years = "2015-2024";
  std::string data_dir = "data/ndbc";
  bool fetch = false;
  std::size_t k1 = 10, k2 = 20;
  std::uint64_t cluster_seed = 1;
  int cluster_jobs = 1;
  cluster_cmd->add_option("--stations", stations, "Comma-separated station ids");
  cluster_cmd->add_option("--years", years, "YYYY or YYYY-YYYY");
  cluster_cmd->add_option("--data-dir", data_dir, "Directory of <station>h<year>.txt files");
  cluster_cmd->add_flag("--fetch", fetch, "Download missing files into --data-dir");
  cluster_cmd->add_option("--k1", k1, "Clusters per station");
  cluster_cmd->add_option("--k2", k2, "Final clusters");
  cluster_cmd->add_option("--seed", cluster_seed, "Clustering seed");
  cluster_cmd->add_option("--jobs", cluster_jobs, "Worker threads");
  cluster_cmd->add_option("--out", out_path, "Output file")->required();

  auto* mesh_cmd = app.add_subcommand("mesh-info", "Panel counts for an external BEM mesh");
  std::string mesh_params = "default";
  mesh_cmd->add_option("--design", design_spec, "Design JSON file, 'nominal' or 'reference'");
  mesh_cmd->add_option("--params", mesh_params, "Parameter file, or 'default'");

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a parameter file");
  std::string validate_path;
  validate_cmd->add_option("params", validate_path, "Parameter file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*evaluate_cmd) {
      const auto ctx = build_context(common);
      const auto design = read_design(design_spec);
      EvalOptions opt;
      opt.record_series = !timeseries_path.empty();
      const auto e = evaluate(design, ctx, opt);
      const auto text = evaluation_to_json(e).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        write_text(out_path, text);
      }
      if (!timeseries_path.empty()) {
        std::ostringstream s;
        write_timeseries_csv(e.sim.series, s);
        write_text(timeseries_path, s.str());
      }
      if (!export_coeffs.empty()) {
        const auto g = build_geometry(design, ctx.params);
        save_coefficients(coefficients_for(g, ctx), export_coeffs);
      }
      if (e.failed) std::cerr << "simulation failed: " << e.diagnostic << "\n";
      return 0;
    }

    for (auto* cmd : {optimize_cmd, sdo_a_cmd, sdo_b_cmd}) {
      if (!*cmd) continue;
      const auto ctx = build_context(common);
      const auto cfg = ga_config(ga, common.seed);
      const auto r = cmd == optimize_cmd ? run_mdo(ctx, cfg)
                     : cmd == sdo_a_cmd  ? run_sdo_a(ctx, cfg)
                                         : run_sdo_b(ctx, cfg);
      write_report_dir(out_dir, r);
      print_summary(r);
      return 0;
    }

    if (*sens_cmd) {
      const auto p = read_params(common);
      const auto seas = load_seastates(seastates_path);
      const auto cfg = ga_config(ga, common.seed);
      if (!common.hydro_file.empty() || !common.cost_curves.empty()) {
        throw ConfigError("sensitivity: --hydro-file and --cost-curves are not supported");
      }
      const auto reports =
          run_sensitivity(p, seas, cfg, common.seed, parse_spectrum_mode(common.spectrum));
      fs::create_directories(out_dir);
      for (std::size_t i = 0; i < reports.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "seastate_%03zu", i);
        write_report_dir(fs::path(out_dir) / name, reports[i]);
      }
      std::ostringstream s;
      write_sensitivity_csv(reports, s);
      write_text(fs::path(out_dir) / "summary.csv", s.str());
      std::cout << "sensitivity: " << reports.size() << " sea states\n";
      return 0;
    }

    if (*cluster_cmd) {
      std::vector<std::string> ids;
      std::stringstream ss(stations);
      for (std::string id; std::getline(ss, id, ',');) {
        if (!id.empty()) ids.push_back(id);
      }
      if (ids.empty()) throw ConfigError("stations: none given");
      std::map<std::string, std::vector<Observation>> per_station;
      for (const auto& id : ids) {
        auto& obs = per_station[id];
        ParseLedger total;
        for (int y : parse_years(years)) {
          fs::path file = fs::path(data_dir) / (id + "h" + std::to_string(y) + ".txt");
          if (!fs::exists(file)) {
            if (!fetch) throw ConfigError("missing buoy file " + file.string());
            file = fetch_ndbc(id, y, data_dir);
          }
          std::ifstream in(file, std::ios::binary);
          std::stringstream buf;
          buf << in.rdbuf();
          auto parsed = parse_ndbc(buf.str(), id);
          obs.insert(obs.end(), parsed.observations.begin(), parsed.observations.end());
          total.data_rows += parsed.ledger.data_rows;
          total.kept += parsed.ledger.kept;
          total.sentinel += parsed.ledger.sentinel;
          total.missing += parsed.ledger.missing;
          total.nonpositive += parsed.ledger.nonpositive;
        }
        std::cerr << id << ": " << total.kept << " of " << total.data_rows << " rows kept ("
                  << total.sentinel << " sentinel, " << total.missing << " missing, "
                  << total.nonpositive << " nonpositive)\n";
      }
      const auto r = two_level_cluster(per_station, k1, k2, cluster_seed, cluster_jobs);
      write_json(out_path, seastates_to_json(r, k1, k2, cluster_seed));
      std::cout << "cluster-seastates: " << r.level2.centers.size() << " sea states\n";
      return 0;
    }

    if (*mesh_cmd) {
      const auto p = mesh_params == "default" ? default_params() : load_params(mesh_params);
      const auto g = build_geometry(read_design(design_spec), p);
      const auto m = mesh_resolution(g.w, g.t, g.h);
      const nlohmann::json j = {{"w", g.w}, {"t", g.t}, {"h", g.h},
                                {"n_surge", m.n_surge}, {"n_sway", m.n_sway},
                                {"n_heave", m.n_heave}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*validate_cmd) {
      const auto p = load_params(validate_path);
      std::printf("ok: %s (checksum %016llx)\n", validate_path.c_str(),
                  static_cast<unsigned long long>(params_checksum(p)));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const HydroFormatError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NdbcFormatError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
