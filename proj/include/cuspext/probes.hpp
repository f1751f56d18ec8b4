#pragma once

#include <vector>

#include "cuspext/quadrature.hpp"

namespace cuspext {

// Piecewise ramp across the flat cell at scale t: 1 on the deep side, 0 on
// the shallow side, graded by the 1/P-weighted depth integral in between.
double strip_ramp_value(const CuspProfile& profile, double t, Vec2 p);

// Dirichlet energy of the ramp over the flat cell (Gauss-Legendre in depth).
double strip_energy(const CuspProfile& profile, double t);

// Fitted exponent e with energy ~ t^e over t = 2^-j, j in [jmin, jmax].
double strip_energy_exponent(const CuspProfile& profile, int jmin, int jmax);

struct AnnulusProbe {
    double energy = 0;        // Dirichlet energy over the annular band minus the domain
    double min_far_wall = 0;  // minimum of the distance field on the far wall
    double band_gap = 0;      // Euclidean separation of the two wall arcs
    bool ok = false;          // far wall cleared the unit level
};

// Weighted geodesic distance (rho = L2/(gap*|w|)) from the lower wall arc,
// solved by first-order fast marching on a polar grid over the annulus.
AnnulusProbe annulus_distance_energy(const CuspProfile& profile, double t, int nr = 128,
                                     int ntheta = 768);

struct OscillationPoint {
    int j = 0;
    double osc = 0;         // diameter of the inverse image of the deep edge segment
    double normalized = 0;  // osc / sqrt(depth)
};

std::vector<OscillationPoint> oscillation_profile(const CellFamily& family, int jmin, int jmax,
                                                  int samples = 200);

}  // namespace cuspext
