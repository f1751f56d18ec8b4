#include "cuspext/probes.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace cuspext {

namespace {

// antiderivative of 1/P(-x) in x (power profile)
double ramp_anti(const CuspProfile& pr, double x) {
    return std::pow(-x, 1.0 - pr.expo) / (pr.coeff * (pr.expo - 1.0));
}

}  // namespace

double strip_ramp_value(const CuspProfile& profile, double t, Vec2 p) {
    double deep = -t * t;
    double shallow = -0.25 * t * t;
    if (p.x <= deep) return 1.0;
    if (p.x >= shallow) return 0.0;
    double denom = ramp_anti(profile, shallow) - ramp_anti(profile, deep);
    return 1.0 - (ramp_anti(profile, p.x) - ramp_anti(profile, deep)) / denom;
}

double strip_energy(const CuspProfile& profile, double t) {
    double deep = -t * t;
    double shallow = -0.25 * t * t;
    double denom = ramp_anti(profile, shallow) - ramp_anti(profile, deep);
    const auto& nodes = gauss_legendre(16);
    double total = 0;
    int panels = 8;
    for (int p = 0; p < panels; ++p) {
        for (const auto& [n, w] : nodes) {
            double a = (p + n) / panels;
            double x = deep + a * (shallow - deep);
            double grad = std::pow(-x, -profile.expo) / (profile.coeff * denom);
            total += w * 2.0 * profile.half_width(-x) * grad * grad;
        }
    }
    return total * (shallow - deep) / panels;
}

double strip_energy_exponent(const CuspProfile& profile, int jmin, int jmax) {
    std::vector<double> xs, ys;
    for (int j = jmin; j <= jmax; ++j) {
        double t = std::pow(2.0, -j);
        xs.push_back(-double(j));  // log2 t
        ys.push_back(std::log2(strip_energy(profile, t)));
    }
    return fit_slope(xs, ys);
}

AnnulusProbe annulus_distance_energy(const CuspProfile& profile, double t, int nr, int ntheta) {
    AnnulusProbe probe;
    double L1 = profile.wall_radius(0.25 * t * t);
    double L2 = profile.wall_radius(t * t);

    std::vector<double> r(nr);
    double lr = std::log(L2 / L1);
    for (int i = 0; i < nr; ++i) r[i] = L1 * std::exp(lr * i / (nr - 1));
    double dtheta = 2.0 * kPi / ntheta;

    // wall angle per radius (upper wall; the lower wall mirrors at 2pi - angle)
    std::vector<double> wall(nr);
    for (int i = 0; i < nr; ++i) wall[i] = profile.wall_angle(profile.wall_depth(r[i]));

    // separation of the two wall arcs
    int ns = 200;
    double gap = 1e300;
    std::vector<Vec2> up(ns), dn(ns);
    for (int i = 0; i < ns; ++i) {
        double rr = L1 + (L2 - L1) * i / (ns - 1);
        double a = profile.wall_angle(profile.wall_depth(rr));
        up[i] = {rr * std::cos(a), rr * std::sin(a)};
        dn[i] = {rr * std::cos(a), -rr * std::sin(a)};
    }
    for (int i = 0; i < ns; ++i)
        for (int k = 0; k < ns; ++k) gap = std::min(gap, dist(up[i], dn[k]));
    probe.band_gap = gap;

    auto rho = [&](int i) { return L2 / (gap * r[i]); };

    const double kInf = 1e300;
    std::vector<double> v((size_t)nr * ntheta, kInf);
    std::vector<char> done((size_t)nr * ntheta, 0);
    auto id = [&](int i, int k) { return (size_t)i * ntheta + ((k % ntheta) + ntheta) % ntheta; };

    using Item = std::pair<double, size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

    // seed along the lower wall curve
    for (int i = 0; i < nr; ++i) {
        double thc = 2.0 * kPi - wall[i];
        int k0 = (int)std::floor(thc / dtheta);
        for (int k : {k0, k0 + 1}) {
            double ang = std::fabs(k * dtheta - thc);
            size_t n = id(i, k);
            double val = rho(i) * r[i] * ang;
            if (val < v[n]) {
                v[n] = val;
                heap.push({val, n});
            }
        }
    }

    auto hr = [&](int i, int j) { return std::fabs(r[j] - r[i]); };

    while (!heap.empty()) {
        auto [val, n] = heap.top();
        heap.pop();
        if (done[n] || val > v[n]) continue;
        done[n] = 1;
        int i = (int)(n / ntheta);
        int k = (int)(n % ntheta);
        // relax the four neighbors
        for (int dir = 0; dir < 4; ++dir) {
            int ii = i, kk = k;
            if (dir == 0) ii = i - 1;
            if (dir == 1) ii = i + 1;
            if (dir == 2) kk = k - 1;
            if (dir == 3) kk = k + 1;
            if (ii < 0 || ii >= nr) continue;
            size_t m = id(ii, kk);
            if (done[m]) continue;
            // upwind solve at (ii, kk)
            double ra = kInf, ha = 1.0;
            if (ii > 0 && done[id(ii - 1, kk)] && v[id(ii - 1, kk)] < ra) {
                ra = v[id(ii - 1, kk)];
                ha = hr(ii, ii - 1);
            }
            if (ii + 1 < nr && done[id(ii + 1, kk)] && v[id(ii + 1, kk)] < ra) {
                ra = v[id(ii + 1, kk)];
                ha = hr(ii, ii + 1);
            }
            double rb = kInf, hb = r[ii] * dtheta;
            if (done[id(ii, kk - 1)]) rb = std::min(rb, v[id(ii, kk - 1)]);
            if (done[id(ii, kk + 1)]) rb = std::min(rb, v[id(ii, kk + 1)]);
            double f = rho(ii);
            double cand = kInf;
            if (ra < kInf && rb < kInf) {
                // (u-ra)^2/ha^2 + (u-rb)^2/hb^2 = f^2
                double A = 1.0 / (ha * ha) + 1.0 / (hb * hb);
                double B = -2.0 * (ra / (ha * ha) + rb / (hb * hb));
                double C = ra * ra / (ha * ha) + rb * rb / (hb * hb) - f * f;
                double disc = B * B - 4 * A * C;
                if (disc >= 0) {
                    double u = (-B + std::sqrt(disc)) / (2 * A);
                    if (u >= std::max(ra, rb)) cand = u;
                }
            }
            if (cand == kInf) {
                if (ra < kInf) cand = std::min(cand, ra + f * ha);
                if (rb < kInf) cand = std::min(cand, rb + f * hb);
            }
            if (cand < v[m]) {
                v[m] = cand;
                heap.push({cand, m});
            }
        }
    }

    // far wall clearance
    double minfar = kInf;
    for (int i = 0; i < nr; ++i) {
        int k0 = (int)std::floor(wall[i] / dtheta);
        for (int k : {k0, k0 + 1}) minfar = std::min(minfar, v[id(i, k)]);
    }
    probe.min_far_wall = minfar;
    probe.ok = minfar >= 1.0;

    // Dirichlet energy over the annular band minus the domain wedge
    double energy = 0;
    for (int i = 1; i + 1 < nr; ++i) {
        double dr = 0.5 * (r[i + 1] - r[i - 1]);
        for (int k = 0; k < ntheta; ++k) {
            double th = k * dtheta;
            bool outside = th > wall[i] && th < 2.0 * kPi - wall[i];
            if (!outside) continue;
            double vr = (v[id(i + 1, k)] - v[id(i - 1, k)]) / (r[i + 1] - r[i - 1]);
            double vt = (v[id(i, k + 1)] - v[id(i, k - 1)]) / (2.0 * dtheta * r[i]);
            if (v[id(i + 1, k)] >= kInf || v[id(i - 1, k)] >= kInf || v[id(i, k + 1)] >= kInf ||
                v[id(i, k - 1)] >= kInf)
                continue;
            energy += (vr * vr + vt * vt) * r[i] * dr * dtheta;
        }
    }
    probe.energy = energy;
    return probe;
}

std::vector<OscillationPoint> oscillation_profile(const CellFamily& family, int jmin, int jmax,
                                                  int samples) {
    std::vector<OscillationPoint> out;
    for (int j = jmin; j <= jmax; ++j) {
        CellMap cm = family.cell_index(j);
        double depth = std::pow(2.0, -2.0 * j);
        double ymax = family.profile.half_width(depth);
        std::vector<Vec2> pre(samples);
        for (int i = 0; i < samples; ++i) {
            double y = -ymax + 2.0 * ymax * i / (samples - 1);
            pre[i] = cm.inverse({-depth, y});
        }
        double osc = 0;
        for (int a = 0; a < samples; ++a)
            for (int b = a + 1; b < samples; ++b) osc = std::max(osc, dist(pre[a], pre[b]));
        OscillationPoint pt;
        pt.j = j;
        pt.osc = osc;
        pt.normalized = osc / std::sqrt(depth);
        out.push_back(pt);
    }
    return out;
}

}  // namespace cuspext
