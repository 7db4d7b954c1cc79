#include "wdds/geometry.hpp"

namespace wdds {

bool within_bounds(const DesignVector& d) {
  const auto a = d.to_array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= kDesignBounds[i].lo && a[i] <= kDesignBounds[i].hi)) return false;
  }
  return true;
}

WecGeometry build_geometry(const DesignVector& d, const ParameterSet& p) {
  const double draft = p.wec.draft;
  if (draft > p.general.depth) {
    throw InfeasibleGeometry("flap draft exceeds water depth");
  }
  WecGeometry g;
  g.w = d.w;
  g.t = d.t;
  g.h = p.wec.height;
  g.draft = draft;
  g.mass = d.m;
  g.submerged_volume = d.w * d.t * draft;
  g.z_cg = p.wec.cg_draft_factor * draft;
  g.z_cb = -0.5 * draft;
  g.I_pitch = d.m * p.wec.unit_inertia;
  g.waterplane_moment = d.w * d.t * d.t * d.t / 12.0;
  g.wetted_area = 2.0 * (d.w * g.h + d.w * d.t + d.t * g.h);
  return g;
}

HydrostaticResult hydrostatic_stiffness(const WecGeometry& g, double rho, double gravity) {
  // Restoring moment about the hinge: buoyancy acts at the centre of buoyancy
  // plus the waterplane contribution; the weight destabilises.
  const double buoyant =
      rho * gravity * (g.waterplane_moment + g.submerged_volume * g.cb_lever());
  const double weight = g.mass * gravity * g.cg_lever();
  const double k = buoyant - weight;
  return {k, k < 0.0};
}

}  // namespace wdds
