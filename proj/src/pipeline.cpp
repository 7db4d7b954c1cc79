#include "wdds/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace wdds {
namespace {

struct DesignModel {
  WecGeometry geom;
  HydroCoefficients coeffs;
  RadiationKernel kernel;
};

DesignModel build_model(const DesignVector& d, const EvalContext& ctx) {
  const auto& p = ctx.params;
  DesignModel m;
  m.geom = build_geometry(d, p);
  m.coeffs = coefficients_for(m.geom, ctx);
  m.kernel = radiation_irf(m.coeffs, p.solver.dt, p.solver.kernel_duration);
  return m;
}

SimInputs sim_inputs(const DesignVector& d, const DesignModel& m, const DesalPlant& plant,
                     const EvalContext& ctx) {
  const auto& p = ctx.params;
  SimInputs in;
  in.inertia = m.geom.I_pitch;
  in.coeffs = &m.coeffs;
  in.kernel = &m.kernel;
  in.wave = &ctx.wave;
  in.mech = {d.l1, p.pto.l2, p.pto.l3};
  in.circuit = make_circuit(d.Vacc, d.P0, plant, p.pto.relief_conductance_factor);
  in.Ap = d.Ap;
  in.cracking_pressure = p.pto.cracking_pressure;
  in.stroke_max = p.pto.stroke_max;
  in.min_cylinder_pressure = p.pto.min_cylinder_pressure;
  in.initial_pressure = plant.P_relief;
  return in;
}

CapexOpex pto_cost(const DesignVector& d, double max_stroke, double P_design,
                   const ParameterSet& p, CylinderSizing* sizing) {
  const auto cyl = cylinder_cost(d.Ap, p.pto.stroke_margin * max_stroke, P_design, p);
  if (sizing) *sizing = cyl;
  return {cyl.cost + accumulator_cost(d.Vacc, p), Usd2025{0.0}};
}

}  // namespace

EvalContext make_context(const ParameterSet& p, const SeaState& sea, std::uint64_t seed,
                         SpectrumMode mode) {
  EvalContext ctx;
  ctx.params = p;
  ctx.sea = sea;
  ctx.spectrum = mode;
  ctx.seed = seed;
  const auto& s = p.solver;
  ctx.wave = synthesize(sea, static_cast<int>(s.n_components), s.sim_time, s.dt, seed,
                        s.ramp_time, mode);
  return ctx;
}

void use_imported_coefficients(EvalContext& ctx, HydroCoefficients coeffs) {
  validate_coefficients(coeffs);
  if (coeffs.geometry_hash.empty()) {
    throw HydroFormatError("field 'geometry_hash': imported coefficients must name a geometry");
  }
  ctx.provider = HydroProvider::imported;
  ctx.imported = std::move(coeffs);
}

HydroCoefficients coefficients_for(const WecGeometry& g, const EvalContext& ctx) {
  const auto& p = ctx.params;
  if (ctx.provider == HydroProvider::imported) {
    const auto& c = *ctx.imported;
    if (c.geometry_hash != geometry_hash(g, p.general.depth)) {
      throw HydroFormatError("imported coefficients belong to a different geometry");
    }
    return c;
  }
  return flat_plate_coefficients(g, p.omega_grid(), p.general.depth, p.general.rho,
                                 p.general.gravity,
                                 {p.solver.dt, p.solver.kernel_duration});
}

double penalty_term(const std::vector<ConstraintViolation>& v) {
  double sum = 0.0;
  for (const auto& c : v) sum += c.magnitude;
  return kPenaltyWeight * sum;
}

Evaluation evaluate(const DesignVector& d, const EvalContext& ctx, const EvalOptions& opt) {
  const auto& p = ctx.params;
  Evaluation e;
  e.design = d;
  try {
    const auto model = build_model(d, ctx);
    e.geometry = model.geom;
    e.statically_unstable = model.coeffs.K_hs < 0.0;
    e.kernel_decay_ok = model.kernel.decay_ok;
    e.plant = size_plant(d.Qpmax, p);

    SimOptions so;
    so.P_max = p.pto.max_pressure_factor * e.plant.P_relief;
    so.record_series = opt.record_series;
    e.sim = simulate(sim_inputs(d, model, e.plant, ctx), so);
    if (e.sim.failed) {
      e.failed = true;
      e.diagnostic = e.sim.diagnostic;
      return e;
    }

    const double T = e.sim.accounted_time;
    e.mean_flows.intake = e.sim.intake_volume / T * kSecondsPerDay;
    e.mean_flows.membrane_feed =
        (e.sim.permeate_volume + e.sim.brine_volume) / T * kSecondsPerDay;
    e.mean_flows.permeate = e.sim.permeate_volume / T * kSecondsPerDay;

    const auto wec = wec_cost(e.geometry, p);
    const auto pto = pto_cost(d, e.sim.max_stroke, e.plant.P_relief, p, &e.cylinder);
    e.swro = swro_cost(e.plant, e.mean_flows, p, ctx.curves);
    e.cost = {wec.capex, pto.capex, e.swro.total.capex,
              wec.opex,  pto.opex,  e.swro.total.opex};
    e.awp = annual_water_production(e.sim, p.general.availability);
    e.lcow = lcow(e.cost, e.awp, p.general.fcr);
    e.penalty = penalty_term(e.sim.violations);
    e.objective = std::isfinite(e.lcow) ? e.lcow + e.penalty : kFailedObjective;
  } catch (const std::exception& ex) {
    e.failed = true;
    e.diagnostic = ex.what();
    e.objective = kFailedObjective;
  }
  return e;
}

double penalized_objective(const DesignVector& d, const EvalContext& ctx) {
  return evaluate(d, ctx).objective;
}

StageValue lcoke_objective(const DesignVector& d, const EvalContext& ctx) {
  const auto& p = ctx.params;
  try {
    const auto model = build_model(d, ctx);
    const double ke =
        kinetic_energy_metric(model.geom.I_pitch, model.coeffs, model.kernel, ctx.sea,
                              p.solver.dt, p.solver.sim_time, p.solver.ramp_time);
    const double v = lcoke(wec_cost(model.geom, p), ke, p.general.fcr);
    if (!std::isfinite(v)) return {};
    return {v, true};
  } catch (const std::exception&) {
    return {};
  }
}

StageValue lcof_objective(const DesignVector& d, const EvalContext& ctx) {
  const auto& p = ctx.params;
  try {
    const auto model = build_model(d, ctx);
    // The plant is replaced by a throttle that passes the nominal plant's
    // full-capacity feed at its relief pressure.
    const auto nominal_plant = size_plant(nominal_design().Qpmax, p);
    const double feed_cap = nominal_plant.Qpmax / nominal_plant.eta_RO;

    SimOptions so;
    so.outflow = OutflowMode::throttle;
    so.R_throttle = nominal_plant.P_relief / feed_cap;
    so.P_max = p.pto.max_pressure_factor * nominal_plant.P_relief;
    const auto sim = simulate(sim_inputs(d, model, nominal_plant, ctx), so);
    if (sim.failed) return {};

    const auto wec = wec_cost(model.geom, p);
    const auto pto = pto_cost(d, sim.max_stroke, nominal_plant.P_relief, p, nullptr);
    const double annual_feed =
        sim.intake_volume * (kSecondsPerYear / sim.accounted_time) * p.general.availability;
    const double v = lcof(wec, pto, annual_feed, p.general.fcr);
    if (!std::isfinite(v)) return {};
    const double pen = penalty_term(sim.violations);
    return {v + pen, pen == 0.0};
  } catch (const std::exception&) {
    return {};
  }
}

nlohmann::json design_to_json(const DesignVector& d) {
  nlohmann::json j = nlohmann::json::object();
  const auto a = d.to_array();
  for (std::size_t i = 0; i < DesignVector::size; ++i) j[std::string(kDesignNames[i])] = a[i];
  return j;
}

DesignVector design_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("design: expected an object");
  std::array<double, DesignVector::size> a{};
  for (std::size_t i = 0; i < DesignVector::size; ++i) {
    const std::string key(kDesignNames[i]);
    if (!j.contains(key) || !j[key].is_number()) {
      throw ConfigError("design: missing or non-numeric '" + key + "'");
    }
    a[i] = j[key].get<double>();
  }
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto n : kDesignNames) known = known || key == n;
    if (!known) throw ConfigError("design: unknown key '" + key + "'");
  }
  return DesignVector::from_array(a);
}

nlohmann::json evaluation_to_json(const Evaluation& e) {
  using nlohmann::json;
  json j;
  j["schema"] = "wdds-evaluation/1";
  j["design"] = design_to_json(e.design);
  j["failed"] = e.failed;
  j["feasible"] = e.feasible();
  j["diagnostic"] = e.diagnostic;
  // JSON has no infinity; an unpriceable design reports null.
  j["lcow"] = std::isfinite(e.lcow) ? json(e.lcow) : json(nullptr);
  j["penalty"] = e.penalty;
  j["objective"] = e.objective;
  j["awp_m3_per_yr"] = e.awp;
  j["statically_unstable"] = e.statically_unstable;
  j["kernel_decay_ok"] = e.kernel_decay_ok;
  j["mean_flows_m3_per_day"] = {{"intake", e.mean_flows.intake},
                                {"membrane_feed", e.mean_flows.membrane_feed},
                                {"permeate", e.mean_flows.permeate}};
  const auto& c = e.cost;
  auto money = [](Usd2025 v) { return std::isfinite(v.value) ? json(v.value) : json(nullptr); };
  j["cost_usd2025"] = {{"capex", {{"wec", money(c.capex_wec)},
                                  {"pto", money(c.capex_pto)},
                                  {"swro", money(c.capex_swro)},
                                  {"total", money(c.capex())}}},
                       {"opex_per_yr", {{"wec", money(c.opex_wec)},
                                        {"pto", money(c.opex_pto)},
                                        {"swro", money(c.opex_swro)},
                                        {"total", money(c.opex())}}}};
  json items = json::object();
  for (const auto& [k, v] : e.swro.capex_items) items["capex"][k] = money(v);
  for (const auto& [k, v] : e.swro.opex_items) items["opex_per_yr"][k] = money(v);
  j["swro_items_usd2025"] = items;
  j["plant"] = {{"Qpmax_m3_per_s", e.plant.Qpmax}, {"membrane_area_m2", e.plant.A_m},
                {"R_m_Pa_s_per_m3", e.plant.R_m},  {"delta_pi_Pa", e.plant.delta_pi},
                {"P_relief_Pa", e.plant.P_relief}, {"R_t_Pa_s_per_m3", e.plant.R_t}};
  j["cylinder"] = {{"bore_radius_m", e.cylinder.radius}, {"wall_m", e.cylinder.wall},
                   {"cap_m", e.cylinder.cap},            {"rod_diameter_m", e.cylinder.rod_diameter},
                   {"length_m", e.cylinder.length},      {"steel_volume_m3", e.cylinder.V_total}};
  const auto& s = e.sim;
  j["simulation"] = {{"permeate_volume_m3", s.permeate_volume},
                     {"intake_volume_m3", s.intake_volume},
                     {"brine_volume_m3", s.brine_volume},
                     {"max_stroke_m", s.max_stroke},
                     {"max_pressure_Pa", s.max_pressure},
                     {"min_cylinder_pressure_Pa", s.min_cyl_pressure},
                     {"max_abs_pitch_rad", s.max_abs_pitch},
                     {"accounted_time_s", s.accounted_time},
                     {"empty_steps", s.empty_steps}};
  json viol = json::array();
  for (const auto& v : s.violations) {
    viol.push_back({{"name", v.name}, {"relative_magnitude", v.magnitude}, {"first_time_s", v.first_time}});
  }
  j["constraints"] = viol;
  return j;
}

void write_timeseries_csv(const TimeSeries& ts, std::ostream& out) {
  out << "t,theta,theta_dot,s,P_feed,Q_perm,Q_brine,Q_relief\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << buf << sep;
  };
  for (std::size_t i = 0; i < ts.t.size(); ++i) {
    put(ts.t[i], ',');
    put(ts.theta[i], ',');
    put(ts.theta_dot[i], ',');
    put(ts.s[i], ',');
    put(ts.P_feed[i], ',');
    put(ts.Q_perm[i], ',');
    put(ts.Q_brine[i], ',');
    put(ts.Q_relief[i], '\n');
  }
}

}  // namespace wdds
