#include "wdds/sysdyn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wdds {
namespace {

// A flap lying flat is outside any meaningful operating range; far beyond
// that the linear model has blown up.
constexpr double kPitchLimit = 0.5 * std::numbers::pi;
constexpr double kDivergedPitch = 4.0 * std::numbers::pi;

struct PtoHalfStep {
  double x;               // velocity after the half-step
  CircuitStep hyd;
  double Q_in;
};

// Implicit PTO update over h with the lever frozen:
//   M (x - x_n) = -h |L| Ap (P(Q(x)) + 2 c) sgn(x),  Q(x) = Ap |L x|.
PtoHalfStep pto_half_step(double x_n, double lever, double M, double h,
                          const HydraulicState& hs, const SimInputs& in) {
  const auto& cfg = in.circuit;
  const double c = in.cracking_pressure;
  const double gain = h / M * std::abs(lever) * in.Ap;
  auto pressure = [&](double q) { return node_pressure(hs, q, cfg, h); };

  const double speed = std::abs(x_n);
  if (gain == 0.0 || speed <= gain * (pressure(0.0) + 2.0 * c)) {
    return {0.0, step_circuit(hs, 0.0, cfg, h), 0.0};
  }
  const double q_per_y = in.Ap * std::abs(lever);
  auto phi = [&](double y) { return y - speed + gain * (pressure(q_per_y * y) + 2.0 * c); };

  // Illinois false position on [0, speed]; phi(0) < 0 <= phi(speed).
  double a = 0.0, fa = phi(0.0);
  double b = speed, fb = phi(speed);
  double y = b;
  if (fb > 0.0) {
    int side = 0;
    for (int it = 0; it < 100; ++it) {
      y = (a * fb - b * fa) / (fb - fa);
      const double fy = phi(y);
      if (fy == 0.0 || (b - a) <= 1e-13 * speed) break;
      if (fy * fb > 0.0) {
        b = y;
        fb = fy;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = y;
        fa = fy;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
      if (std::abs(fy) <= 1e-14 * speed) break;
    }
  }
  const double x = std::copysign(y, x_n);
  const double Q = q_per_y * y;
  return {x, step_circuit(hs, Q, cfg, h), Q};
}

}  // namespace

PistonKinematics piston_kinematics(double theta, const MechanismConfig& m) {
  const double sq = m.l1 * m.l1 + m.l2 * m.l2 + m.l3 * m.l3 -
                    2.0 * m.l1 * (m.l2 * std::sin(theta) + m.l3 * std::cos(theta));
  const double s = std::sqrt(std::max(sq, 0.0));
  if (s < 1e-12) throw std::domain_error("mechanism attachment coincides with the anchor");
  const double ds = -m.l1 * (m.l2 * std::cos(theta) - m.l3 * std::sin(theta)) / s;
  return {s, ds};
}

SimulationResult simulate(const SimInputs& in, const SimOptions& opt) {
  SimulationResult r;
  const auto& wave = *in.wave;
  const auto& kern = *in.kernel;
  const double dt = wave.dt;
  const auto N = static_cast<std::size_t>(std::llround(wave.duration / dt));
  const double M = in.inertia + kern.A_inf;
  const double Khs = in.coeffs->K_hs;

  if (std::abs(kern.dt - dt) > 1e-12 * dt) {
    throw std::invalid_argument("radiation kernel and wave realization use different steps");
  }

  const auto fe = excitation_series(wave, *in.coeffs, 0.5 * dt);

  CircuitConfig cfg = in.circuit;
  cfg.mode = opt.outflow;
  if (opt.outflow == OutflowMode::throttle) cfg.R_throttle = opt.R_throttle;
  SimInputs local = in;
  local.circuit = cfg;

  const std::size_t m = kern.K.size() - 1;
  std::vector<double> hist(N + 1, 0.0);

  double theta = 0.0;
  double x = 0.0;
  HydraulicState hs;
  if (in.initial_pressure > cfg.P0) {
    hs.V_liquid = cfg.Vacc * (1.0 - cfg.P0 / in.initial_pressure);
    hs.P_feed = in.initial_pressure;
  }
  const double V_start = hs.V_liquid;

  auto& ts = r.series;
  if (opt.record_series) {
    for (auto* v : {&ts.t, &ts.theta, &ts.theta_dot, &ts.s, &ts.P_feed, &ts.Q_perm,
                    &ts.Q_brine, &ts.Q_relief}) {
      v->reserve(N + 1);
    }
  }

  double s_min = 0.0, s_max = 0.0;
  try {
    const auto k0 = piston_kinematics(0.0, in.mech);
    s_min = s_max = k0.s;
    if (opt.record_series) {
      ts.t.push_back(0.0);
      ts.theta.push_back(0.0);
      ts.theta_dot.push_back(0.0);
      ts.s.push_back(k0.s);
      ts.P_feed.push_back(hs.P_feed);
      ts.Q_perm.push_back(0.0);
      ts.Q_brine.push_back(0.0);
      ts.Q_relief.push_back(0.0);
    }
  } catch (const std::exception& e) {
    r.failed = true;
    r.diagnostic = e.what();
    return r;
  }

  const double ramp = std::min(wave.ramp_time, wave.duration);
  double max_abs_theta = 0.0, pitch_first = -1.0;
  double stroke_first = -1.0, pressure_first = -1.0, suction_first = -1.0;
  double ke_sum = 0.0, v2_sum = 0.0;
  std::size_t ke_count = 0;
  bool pumped = false;

  auto run_pto = [&](double t_now) {
    if (!opt.pto_connected) return;
    const auto kin = piston_kinematics(theta, in.mech);
    const double x_before = x;
    const auto half = pto_half_step(x, kin.ds_dtheta, M, 0.5 * dt, hs, local);
    x = half.x;
    const double h = 0.5 * dt;
    const double P = half.hyd.state.P_feed;
    const double Qout = half.hyd.flows.total();
    auto& hl = r.hydraulic;
    hl.work_in += P * half.Q_in * h;
    hl.work_out += P * Qout * h;
    const double v_p = kin.ds_dtheta * x;
    const auto pc = piston_coupling(v_p, P, in.Ap, in.cracking_pressure);
    const double pw = pc.force * v_p * h;
    hl.piston_work += pw;
    if (pw > 0.0) hl.dissipative = false;
    if (half.Q_in > 0.0) {
      pumped = true;
      if (suction_first < 0.0 && -in.cracking_pressure < in.min_cylinder_pressure) {
        suction_first = t_now;
      }
    }
    r.energy.pto += 0.5 * M * (x_before * x_before - x * x);
    hs = half.hyd.state;
    r.max_pressure = std::max(r.max_pressure, P);
    if (opt.P_max > 0.0 && P > opt.P_max && pressure_first < 0.0) pressure_first = t_now;
  };

  try {
    for (std::size_t n = 0; n < N; ++n) {
      const double t = static_cast<double>(n) * dt;
      const HydraulicState before = hs;

      run_pto(t);

      // Memory sums for the two bracketing history points.
      double Sa = 0.0, Sb = 0.0;
      for (std::size_t j = 1; j <= m; ++j) {
        const double wgt = (j == m ? 0.5 : 1.0) * kern.K[j];
        if (n >= j) Sa += wgt * hist[n - j];
        if (n + 1 >= j) Sb += wgt * hist[n + 1 - j];
      }
      auto conv = [&](double c, double v) {
        return dt * (0.5 * kern.K[0] * v + (1.0 - c) * Sa + c * Sb);
      };
      auto accel = [&](double fe_t, double conv_t, double th) {
        return (fe_t - conv_t - Khs * th) / M;
      };

      const double f1 = fe[2 * n], f2 = fe[2 * n + 1], f3 = fe[2 * n + 2];
      const double th1 = theta, v1 = x;
      const double c1 = conv(0.0, v1);
      const double a1 = accel(f1, c1, th1);
      const double th2 = theta + 0.5 * dt * v1, v2 = x + 0.5 * dt * a1;
      const double c2 = conv(0.5, v2);
      const double a2 = accel(f2, c2, th2);
      const double th3 = theta + 0.5 * dt * v2, v3 = x + 0.5 * dt * a2;
      const double c3 = conv(0.5, v3);
      const double a3 = accel(f2, c3, th3);
      const double th4 = theta + dt * v3, v4 = x + dt * a3;
      const double c4 = conv(1.0, v4);
      const double a4 = accel(f3, c4, th4);

      r.energy.excitation += dt / 6.0 * (f1 * v1 + 2.0 * f2 * v2 + 2.0 * f2 * v3 + f3 * v4);
      r.energy.radiated += dt / 6.0 * (c1 * v1 + 2.0 * c2 * v2 + 2.0 * c3 * v3 + c4 * v4);

      theta += dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
      x += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);

      const double t_next = t + dt;
      run_pto(t_next);

      if (!std::isfinite(theta) || !std::isfinite(x)) {
        throw std::runtime_error("non-finite state at t = " + std::to_string(t_next));
      }
      max_abs_theta = std::max(max_abs_theta, std::abs(theta));
      if (max_abs_theta > kPitchLimit && pitch_first < 0.0) pitch_first = t_next;
      if (max_abs_theta > kDivergedPitch) {
        throw std::runtime_error("pitch diverged at t = " + std::to_string(t_next));
      }

      hist[n + 1] = x;
      const auto kin = piston_kinematics(theta, in.mech);
      s_min = std::min(s_min, kin.s);
      s_max = std::max(s_max, kin.s);
      if (s_max - s_min > in.stroke_max && stroke_first < 0.0) stroke_first = t_next;

      if (t >= ramp - 1e-9) {
        r.permeate_volume += hs.permeate - before.permeate;
        r.intake_volume += hs.intake - before.intake;
        r.brine_volume += hs.brine - before.brine;
        ke_sum += 0.5 * M * x * x;
        v2_sum += x * x;
        ++ke_count;
      }

      if (opt.record_series) {
        ts.t.push_back(t_next);
        ts.theta.push_back(theta);
        ts.theta_dot.push_back(x);
        ts.s.push_back(kin.s);
        ts.P_feed.push_back(hs.P_feed);
        ts.Q_perm.push_back((hs.permeate - before.permeate) / dt);
        ts.Q_brine.push_back((hs.brine - before.brine) / dt);
        ts.Q_relief.push_back((hs.relief - before.relief) / dt);
      }
    }
  } catch (const std::exception& e) {
    r.failed = true;
    r.diagnostic = e.what();
  }

  r.max_stroke = s_max - s_min;
  r.min_cyl_pressure = pumped ? -in.cracking_pressure : 0.0;
  r.accounted_time = wave.duration - ramp;
  if (ke_count > 0) {
    r.mean_kinetic_energy = ke_sum / static_cast<double>(ke_count);
    r.mean_theta_dot_sq = v2_sum / static_cast<double>(ke_count);
  }
  r.empty_steps = hs.empty_steps;
  r.energy.delta_ke = 0.5 * M * x * x;
  r.energy.delta_pe = 0.5 * Khs * theta * theta;

  auto& hl = r.hydraulic;
  hl.intake = hs.intake;
  hl.permeate = hs.permeate;
  hl.brine = hs.brine;
  hl.relief = hs.relief;
  hl.delta_stored = hs.V_liquid - V_start;
  hl.delta_gas = accumulator_energy(hs.V_liquid, cfg.Vacc, cfg.P0) -
                 accumulator_energy(V_start, cfg.Vacc, cfg.P0);

  r.max_abs_pitch = max_abs_theta;
  if (max_abs_theta > kPitchLimit) {
    r.violations.push_back({"pitch_range", (max_abs_theta - kPitchLimit) / kPitchLimit,
                            pitch_first});
  }
  if (r.max_stroke > in.stroke_max) {
    r.violations.push_back(
        {"stroke", (r.max_stroke - in.stroke_max) / in.stroke_max, stroke_first});
  }
  if (opt.P_max > 0.0 && r.max_pressure > opt.P_max) {
    r.violations.push_back(
        {"max_pressure", (r.max_pressure - opt.P_max) / opt.P_max, pressure_first});
  }
  if (r.min_cyl_pressure < in.min_cylinder_pressure) {
    r.violations.push_back({"min_cylinder_pressure",
                            (in.min_cylinder_pressure - r.min_cyl_pressure) /
                                std::abs(in.min_cylinder_pressure),
                            suction_first});
  }
  return r;
}

double annual_water_production(const SimulationResult& r, double availability) {
  if (r.accounted_time <= 0.0) return 0.0;
  return r.permeate_volume * (kSecondsPerYear / r.accounted_time) * availability;
}

double kinetic_energy_metric(double inertia, const HydroCoefficients& coeffs,
                             const RadiationKernel& kernel, const SeaState& sea, double dt,
                             double duration, double ramp_time) {
  const double wp = 2.0 * std::numbers::pi / sea.Tp;
  const auto wave = regular_wave(wp, 0.5 * sea.Hs, duration, dt, ramp_time);
  SimInputs in;
  in.inertia = inertia;
  in.coeffs = &coeffs;
  in.kernel = &kernel;
  in.wave = &wave;
  SimOptions opt;
  opt.pto_connected = false;
  const auto r = simulate(in, opt);
  if (r.failed) return 0.0;
  const double A = interpolate(coeffs, wp).added_mass;
  const double mean_ke = 0.5 * (inertia + A) * r.mean_theta_dot_sq;  // J
  const double cycles_per_year = kSecondsPerYear / sea.Tp;
  return mean_ke * cycles_per_year / 3.6e6;
}

}  // namespace wdds
