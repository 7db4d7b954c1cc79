#include "wdds/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>

#include "wdds/rng.hpp"

namespace wdds {
namespace {

using Rng = PortableRng;

Genome random_genome(std::size_t n_bits, Rng& rng) {
  Genome g(n_bits);
  for (auto& b : g) b = rng.bit();
  return g;
}

// Stable ranking: lower value first, ties broken by population index.
std::vector<std::size_t> rank(const std::vector<Fitness>& f) {
  std::vector<std::size_t> idx(f.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return f[a].value < f[b].value; });
  return idx;
}

class Evaluator {
 public:
  Evaluator(const GenomeObjective& obj, int jobs) : obj_(obj), jobs_(jobs) {}

  std::vector<Fitness> operator()(const std::vector<Genome>& pop) {
    std::vector<const Genome*> todo;
    std::map<Genome, bool> queued;
    for (const auto& g : pop) {
      if (!cache_.contains(g) && queued.emplace(g, true).second) todo.push_back(&g);
    }
    std::vector<Fitness> fresh(todo.size());
    parallel_for(todo.size(), jobs_, [&](std::size_t i) { fresh[i] = obj_(*todo[i]); });
    for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(*todo[i], fresh[i]);

    std::vector<Fitness> out;
    out.reserve(pop.size());
    for (const auto& g : pop) out.push_back(cache_.at(g));
    return out;
  }

  [[nodiscard]] std::size_t evaluations() const { return cache_.size(); }

 private:
  const GenomeObjective& obj_;
  int jobs_;
  std::map<Genome, Fitness> cache_;
};

HistoryRow summarize_generation(int gen, const std::vector<Fitness>& f) {
  HistoryRow row;
  row.generation = gen;
  row.best = f.front().value;
  double sum = 0.0;
  std::size_t feasible = 0;
  for (const auto& x : f) {
    row.best = std::min(row.best, x.value);
    sum += x.value;
    feasible += x.feasible ? 1 : 0;
  }
  row.mean = sum / static_cast<double>(f.size());
  row.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(f.size());
  return row;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void GaConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("ga: " + m); };
  if (population_size < 2) fail("population_size must be at least 2");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation_rate must be in [0, 1]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate must be in [0, 1]");
  if (elites < 0 || elites >= population_size) fail("elites must be in [0, population_size)");
  if (tournament_size < 1) fail("tournament_size must be positive");
  if (bits_per_variable < 1 || bits_per_variable > 31) fail("bits_per_variable must be in [1, 31]");
  if (immigration_interval < 0) fail("immigration_interval must be non-negative");
  if (immigrant_count < 0 || immigrant_count >= population_size) {
    fail("immigrant_count must be in [0, population_size)");
  }
  if (immigrant_count + elites > population_size) fail("immigrants would displace the elites");
  if (max_generations < 1) fail("max_generations must be positive");
  if (jobs < 1) fail("jobs must be positive");
}

std::uint32_t max_code(int bits) { return (std::uint32_t{1} << bits) - 1; }

std::vector<std::uint32_t> genome_codes(const Genome& g, int bits) {
  if (bits < 1 || g.size() % static_cast<std::size_t>(bits) != 0) {
    throw std::invalid_argument("genome length is not a multiple of the field width");
  }
  std::vector<std::uint32_t> codes(g.size() / static_cast<std::size_t>(bits));
  for (std::size_t v = 0; v < codes.size(); ++v) {
    std::uint32_t c = 0;
    for (int b = 0; b < bits; ++b) c = (c << 1) | g[v * bits + b];
    codes[v] = c;
  }
  return codes;
}

double decode_value(std::uint32_t code, int bits, Bounds b) {
  return b.lo + static_cast<double>(code) / static_cast<double>(max_code(bits)) * (b.hi - b.lo);
}

std::uint32_t encode_value(double x, int bits, Bounds b) {
  const double top = max_code(bits);
  const double c = std::round((x - b.lo) / (b.hi - b.lo) * top);
  return static_cast<std::uint32_t>(std::clamp(c, 0.0, top));
}

std::vector<double> decode(const Genome& g, std::span<const Bounds> bounds, int bits) {
  if (g.size() != bounds.size() * static_cast<std::size_t>(bits)) {
    throw std::invalid_argument("genome length does not match the variable count");
  }
  const auto codes = genome_codes(g, bits);
  std::vector<double> x(codes.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = decode_value(codes[i], bits, bounds[i]);
  return x;
}

Genome encode(std::span<const double> x, std::span<const Bounds> bounds, int bits) {
  if (x.size() != bounds.size()) throw std::invalid_argument("value and bound counts differ");
  Genome g;
  g.reserve(x.size() * static_cast<std::size_t>(bits));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = encode_value(x[i], bits, bounds[i]);
    for (int b = bits - 1; b >= 0; --b) g.push_back(static_cast<std::uint8_t>((c >> b) & 1U));
  }
  return g;
}

GaResult ga_run(std::size_t n_bits, const GenomeObjective& objective, const GaConfig& cfg,
                const std::vector<Genome>& initial) {
  cfg.validate();
  if (n_bits == 0) throw std::invalid_argument("ga_run needs at least one bit");
  const auto pop_size = static_cast<std::size_t>(cfg.population_size);

  Rng rng(cfg.seed);
  Evaluator eval(objective, cfg.jobs);

  std::vector<Genome> pop;
  pop.reserve(pop_size);
  for (const auto& g : initial) {
    if (g.size() != n_bits) throw std::invalid_argument("initial genome has the wrong length");
    if (pop.size() < pop_size) pop.push_back(g);
  }
  while (pop.size() < pop_size) pop.push_back(random_genome(n_bits, rng));
  auto fit = eval(pop);

  GaResult res;
  auto track = [&](int gen) {
    res.history.push_back(summarize_generation(gen, fit));
    const auto best = rank(fit).front();
    if (res.best_genome.empty() || fit[best].value < res.best.value) {
      res.best_genome = pop[best];
      res.best = fit[best];
    }
  };
  track(0);

  auto tournament = [&] {
    std::size_t winner = rng.index(pop_size);
    for (int k = 1; k < cfg.tournament_size; ++k) {
      const auto c = rng.index(pop_size);
      if (fit[c].value < fit[winner].value) winner = c;
    }
    return winner;
  };

  for (int gen = 1; gen < cfg.max_generations; ++gen) {
    const auto order = rank(fit);
    std::vector<Genome> next;
    next.reserve(pop_size);
    for (int e = 0; e < cfg.elites; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);

    while (next.size() < pop_size) {
      Genome a = pop[tournament()];
      Genome b = pop[tournament()];
      if (n_bits > 1 && rng.uniform() < cfg.crossover_rate) {
        const auto cut = 1 + rng.index(n_bits - 1);
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
                         b.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      for (Genome* c : {&a, &b}) {
        if (rng.uniform() < cfg.mutation_rate) (*c)[rng.index(n_bits)] ^= 1U;
      }
      next.push_back(std::move(a));
      if (next.size() < pop_size) next.push_back(std::move(b));
    }
    pop = std::move(next);
    fit = eval(pop);

    if (cfg.immigration_interval > 0 && gen % cfg.immigration_interval == 0) {
      const auto ranked = rank(fit);
      for (int i = 0; i < cfg.immigrant_count; ++i) {
        pop[ranked[pop_size - 1 - static_cast<std::size_t>(i)]] = random_genome(n_bits, rng);
      }
      fit = eval(pop);
    }
    track(gen);
  }
  res.evaluations = eval.evaluations();
  return res;
}

std::size_t DesignSpace::n_active() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

std::vector<Bounds> DesignSpace::bounds() const {
  std::vector<Bounds> b;
  for (std::size_t i = 0; i < DesignVector::size; ++i) {
    if (active[i]) b.push_back(kDesignBounds[i]);
  }
  return b;
}

DesignVector DesignSpace::expand(std::span<const double> values) const {
  if (values.size() != n_active()) throw std::invalid_argument("wrong number of active values");
  auto a = frozen.to_array();
  std::size_t k = 0;
  for (std::size_t i = 0; i < DesignVector::size; ++i) {
    if (active[i]) a[i] = values[k++];
  }
  return DesignVector::from_array(a);
}

std::vector<double> DesignSpace::project(const DesignVector& d) const {
  const auto a = d.to_array();
  std::vector<double> v;
  for (std::size_t i = 0; i < DesignVector::size; ++i) {
    if (active[i]) v.push_back(a[i]);
  }
  return v;
}

std::vector<std::string> DesignSpace::names() const {
  std::vector<std::string> n;
  for (std::size_t i = 0; i < DesignVector::size; ++i) {
    if (active[i]) n.emplace_back(kDesignNames[i]);
  }
  return n;
}

DesignSpace DesignSpace::all() {
  DesignSpace s;
  s.active.fill(true);
  return s;
}

DesignSpace DesignSpace::wec(const DesignVector& frozen) {
  return {{true, true, true, false, false, false, false, false}, frozen};
}

DesignSpace DesignSpace::pto(const DesignVector& frozen) {
  return {{false, false, false, true, true, true, true, false}, frozen};
}

DesignSpace DesignSpace::plant(const DesignVector& frozen) {
  return {{false, false, false, false, false, false, false, true}, frozen};
}

StageResult optimize_stage(const std::string& name, const std::string& objective_name,
                           const DesignSpace& space, const DesignObjective& objective,
                           const GaConfig& cfg, const std::vector<DesignVector>& initial) {
  StageResult st;
  st.name = name;
  st.objective = objective_name;
  st.variables = space.names();
  if (space.n_active() == 0) {
    st.best = space.frozen;
    st.best_fitness = objective(space.frozen);
    st.evaluations = 1;
    return st;
  }
  const auto bounds = space.bounds();
  const int bits = cfg.bits_per_variable;
  std::vector<Genome> seeds;
  for (const auto& d : initial) seeds.push_back(encode(space.project(d), bounds, bits));

  const GenomeObjective genome_obj = [&](const Genome& g) {
    return objective(space.expand(decode(g, bounds, bits)));
  };
  auto res = ga_run(bounds.size() * static_cast<std::size_t>(bits), genome_obj, cfg, seeds);
  st.best = space.expand(decode(res.best_genome, bounds, bits));
  st.best_fitness = res.best;
  st.history = std::move(res.history);
  st.evaluations = res.evaluations;
  return st;
}

EvaluationSummary summarize(const Evaluation& e) {
  return {e.design, e.lcow, e.objective, e.feasible(), e.failed, e.diagnostic};
}

namespace {

DesignObjective lcow_objective(const EvalContext& ctx) {
  return [&ctx](const DesignVector& d) {
    const auto e = evaluate(d, ctx);
    return Fitness{e.objective, e.feasible()};
  };
}

DesignObjective stage_objective(StageValue (*fn)(const DesignVector&, const EvalContext&),
                                const EvalContext& ctx) {
  return [fn, &ctx](const DesignVector& d) {
    const auto v = fn(d, ctx);
    return Fitness{v.value, v.feasible};
  };
}

OptimizationReport start_report(const std::string& workflow, const EvalContext& ctx,
                                const GaConfig& cfg) {
  OptimizationReport r;
  r.workflow = workflow;
  r.sea = ctx.sea;
  r.spectrum = std::string(to_string(ctx.spectrum));
  r.seed = ctx.seed;
  r.params_checksum = params_checksum(ctx.params);
  r.ga = cfg;
  r.ga.jobs = 1;
  r.nominal = summarize(evaluate(nominal_design(), ctx));
  return r;
}

GaConfig with_seed(const GaConfig& cfg, std::uint64_t offset) {
  GaConfig c = cfg;
  c.seed = cfg.seed + offset;
  return c;
}

// Shared first stage of both sequential workflows.
StageResult wec_stage(const EvalContext& ctx, const GaConfig& cfg) {
  const auto space = DesignSpace::wec(nominal_design());
  return optimize_stage("wec", "lcoke", space, stage_objective(lcoke_objective, ctx), cfg,
                        {nominal_design()});
}

}  // namespace

OptimizationReport run_mdo(const EvalContext& ctx, const GaConfig& cfg) {
  auto r = start_report("mdo", ctx, cfg);
  r.stages.push_back(optimize_stage("mdo", "lcow", DesignSpace::all(), lcow_objective(ctx), cfg,
                                    {nominal_design(), reference_initial_design()}));
  r.best = summarize(evaluate(r.stages.back().best, ctx));
  return r;
}

OptimizationReport run_sdo_a(const EvalContext& ctx, const GaConfig& cfg) {
  auto r = start_report("sdo-a", ctx, cfg);
  r.stages.push_back(wec_stage(ctx, cfg));
  const auto pto_space = DesignSpace::pto(r.stages.back().best);
  r.stages.push_back(optimize_stage("pto", "lcof", pto_space,
                                    stage_objective(lcof_objective, ctx), with_seed(cfg, 1),
                                    {pto_space.frozen}));
  const auto plant_space = DesignSpace::plant(r.stages.back().best);
  r.stages.push_back(optimize_stage("plant", "lcow", plant_space, lcow_objective(ctx),
                                    with_seed(cfg, 2), {plant_space.frozen}));
  r.best = summarize(evaluate(r.stages.back().best, ctx));
  return r;
}

OptimizationReport run_sdo_b(const EvalContext& ctx, const GaConfig& cfg) {
  auto r = start_report("sdo-b", ctx, cfg);
  r.stages.push_back(wec_stage(ctx, cfg));
  const auto plant_space = DesignSpace::plant(r.stages.back().best);
  r.stages.push_back(optimize_stage("plant", "lcow", plant_space, lcow_objective(ctx),
                                    with_seed(cfg, 1), {plant_space.frozen}));
  const auto pto_space = DesignSpace::pto(r.stages.back().best);
  r.stages.push_back(optimize_stage("pto", "lcow", pto_space, lcow_objective(ctx),
                                    with_seed(cfg, 2), {pto_space.frozen}));
  r.best = summarize(evaluate(r.stages.back().best, ctx));
  return r;
}

std::vector<OptimizationReport> run_sensitivity(const ParameterSet& p,
                                                const std::vector<SeaState>& seas,
                                                const GaConfig& cfg, std::uint64_t seed,
                                                SpectrumMode mode) {
  cfg.validate();
  std::vector<OptimizationReport> out(seas.size());
  GaConfig inner = cfg;
  if (seas.size() > 1) inner.jobs = 1;
  parallel_for(seas.size(), cfg.jobs, [&](std::size_t i) {
    const auto ctx = make_context(p, seas[i], seed, mode);
    out[i] = run_mdo(ctx, inner);
  });
  return out;
}

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_or_inf(const json& j) {
  return j.is_null() ? kInfeasibleCost : j.get<double>();
}

json summary_to_json(const EvaluationSummary& s) {
  return {{"design", design_to_json(s.design)}, {"lcow", number_or_null(s.lcow)},
          {"objective", s.objective},           {"feasible", s.feasible},
          {"failed", s.failed},                 {"diagnostic", s.diagnostic}};
}

EvaluationSummary summary_from_json(const json& j) {
  EvaluationSummary s;
  s.design = design_from_json(j.at("design"));
  s.lcow = number_or_inf(j.at("lcow"));
  s.objective = j.at("objective").get<double>();
  s.feasible = j.at("feasible").get<bool>();
  s.failed = j.at("failed").get<bool>();
  s.diagnostic = j.at("diagnostic").get<std::string>();
  return s;
}

json history_to_json(const std::vector<HistoryRow>& h) {
  json g = json::array(), b = json::array(), m = json::array(), f = json::array();
  for (const auto& r : h) {
    g.push_back(r.generation);
    b.push_back(r.best);
    m.push_back(r.mean);
    f.push_back(r.feasible_fraction);
  }
  return {{"generation", g}, {"best", b}, {"mean", m}, {"feasible_fraction", f}};
}

std::vector<HistoryRow> history_from_json(const json& j) {
  const auto& g = j.at("generation");
  std::vector<HistoryRow> h(g.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = {g[i].get<int>(), j.at("best")[i].get<double>(), j.at("mean")[i].get<double>(),
            j.at("feasible_fraction")[i].get<double>()};
  }
  return h;
}

json ga_to_json(const GaConfig& c) {
  return {{"population_size", c.population_size},
          {"mutation_rate", c.mutation_rate},
          {"crossover_rate", c.crossover_rate},
          {"elites", c.elites},
          {"tournament_size", c.tournament_size},
          {"bits_per_variable", c.bits_per_variable},
          {"immigration_interval", c.immigration_interval},
          {"immigrant_count", c.immigrant_count},
          {"max_generations", c.max_generations},
          {"seed", c.seed}};
}

GaConfig ga_from_json(const json& j) {
  GaConfig c;
  c.population_size = j.at("population_size").get<int>();
  c.mutation_rate = j.at("mutation_rate").get<double>();
  c.crossover_rate = j.at("crossover_rate").get<double>();
  c.elites = j.at("elites").get<int>();
  c.tournament_size = j.at("tournament_size").get<int>();
  c.bits_per_variable = j.at("bits_per_variable").get<int>();
  c.immigration_interval = j.at("immigration_interval").get<int>();
  c.immigrant_count = j.at("immigrant_count").get<int>();
  c.max_generations = j.at("max_generations").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

json report_to_json(const OptimizationReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"name", s.name},
                      {"objective", s.objective},
                      {"variables", s.variables},
                      {"best", design_to_json(s.best)},
                      {"best_value", s.best_fitness.value},
                      {"best_feasible", s.best_fitness.feasible},
                      {"evaluations", s.evaluations},
                      {"history", history_to_json(s.history)}});
  }
  char checksum[20];
  std::snprintf(checksum, sizeof checksum, "%016llx",
                static_cast<unsigned long long>(r.params_checksum));
  return {{"schema", "wdds-optimization/1"},
          {"workflow", r.workflow},
          {"sea_state", {{"Hs", r.sea.Hs}, {"Tp", r.sea.Tp}}},
          {"spectrum", r.spectrum},
          {"seed", r.seed},
          {"params_checksum", checksum},
          {"ga", ga_to_json(r.ga)},
          {"stages", stages},
          {"best", summary_to_json(r.best)},
          {"nominal", summary_to_json(r.nominal)}};
}

OptimizationReport report_from_json(const json& j) {
  try {
    if (j.at("schema") != "wdds-optimization/1") {
      throw ConfigError("report: unsupported schema");
    }
    OptimizationReport r;
    r.workflow = j.at("workflow").get<std::string>();
    r.sea = {j.at("sea_state").at("Hs").get<double>(), j.at("sea_state").at("Tp").get<double>()};
    r.spectrum = j.at("spectrum").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params_checksum = std::stoull(j.at("params_checksum").get<std::string>(), nullptr, 16);
    r.ga = ga_from_json(j.at("ga"));
    for (const auto& s : j.at("stages")) {
      StageResult st;
      st.name = s.at("name").get<std::string>();
      st.objective = s.at("objective").get<std::string>();
      st.variables = s.at("variables").get<std::vector<std::string>>();
      st.best = design_from_json(s.at("best"));
      st.best_fitness = {s.at("best_value").get<double>(), s.at("best_feasible").get<bool>()};
      st.evaluations = s.at("evaluations").get<std::size_t>();
      st.history = history_from_json(s.at("history"));
      r.stages.push_back(std::move(st));
    }
    r.best = summary_from_json(j.at("best"));
    r.nominal = summary_from_json(j.at("nominal"));
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

void save_report(const OptimizationReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << report_to_json(r).dump(2) << '\n';
}

OptimizationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_history_csv(const std::vector<HistoryRow>& h, std::ostream& out) {
  out << "generation,best,mean,feasible_fraction\n";
  for (const auto& r : h) {
    out << r.generation << ',' << fmt(r.best) << ',' << fmt(r.mean) << ','
        << fmt(r.feasible_fraction) << '\n';
  }
}

void write_sensitivity_csv(const std::vector<OptimizationReport>& reports, std::ostream& out) {
  out << "index,Tp,Hs,w,t,m,l1,Ap,Vacc,P0,Qpmax,lcow\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << i << ',' << fmt(r.sea.Tp) << ',' << fmt(r.sea.Hs);
    for (double v : r.best.design.to_array()) out << ',' << fmt(v);
    out << ',' << (std::isfinite(r.best.lcow) ? fmt(r.best.lcow) : std::string()) << '\n';
  }
}

}  // namespace wdds
