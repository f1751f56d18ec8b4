#include "cuspext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cuspext {

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

double CuspProfile::half_width(double x) const {
    if (x < 0) throw std::domain_error("profile half_width: negative depth");
    return coeff * std::pow(x, expo);
}

double CuspProfile::half_width_d(double x) const {
    if (x <= 0) throw std::domain_error("profile half_width_d: depth must be positive");
    return coeff * expo * std::pow(x, expo - 1.0);
}

double CuspProfile::wall_radius(double x) const {
    if (x < 0) throw std::domain_error("wall_radius: negative depth");
    if (x == 0) return 0.0;
    double w = coeff * coeff * std::pow(x, 2.0 * (expo - 1.0));
    return std::sqrt(x) * std::pow(1.0 + w, 0.25);
}

double CuspProfile::wall_radius_d(double x) const {
    if (x <= 0) throw std::domain_error("wall_radius_d: depth must be positive");
    double w = coeff * coeff * std::pow(x, 2.0 * (expo - 1.0));
    return (1.0 + expo * w) / (2.0 * std::sqrt(x) * std::pow(1.0 + w, 0.75));
}

double CuspProfile::wall_depth(double r) const {
    if (r < 0) throw std::domain_error("wall_depth: negative radius");
    if (r == 0) return 0.0;
    // wall_radius(x) >= sqrt(x), so the root lies in (0, r^2].
    double hi = r * r;
    double lo = 0.0;
    double x = hi;  // exact when coeff == 0; good seed otherwise
    for (int it = 0; it < 200; ++it) {
        double f = wall_radius(x) - r;
        if (f > 0) hi = x; else lo = x;
        if (std::fabs(f) <= 1e-15 * std::max(1.0, r)) break;
        double step = f / wall_radius_d(x);
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

double CuspProfile::wall_angle(double x) const {
    if (x == 0) return kPi / 2.0;
    return (kPi - std::atan(coeff * std::pow(x, expo - 1.0))) / 2.0;
}

double CuspProfile::gap_angle_at_depth(double x) const {
    if (x == 0) return kPi;
    return kPi + std::atan(coeff * std::pow(x, expo - 1.0));
}

Vec2 ell1_point(double s, double u, Branch branch) {
    if (u < -1 || u > 0) throw std::domain_error("ell1_point: u outside [-1, 0]");
    double v = std::pow(-u, s);
    return {u, branch == Branch::Upper ? v : -v};
}

CuspArcPoint ellm_point(double s, double u, Branch branch) {
    if (u < -1 || u > 0) throw std::domain_error("ellm_point: u outside [-1, 0]");
    CuspArcPoint p;
    p.u = u;
    if (u == 0) {
        p.r = 0;
        p.theta = branch == Branch::Upper ? kPi / 2 : -kPi / 2;
        return p;
    }
    double mu = -u;
    p.r = std::sqrt(mu) * std::pow(1.0 + std::pow(mu, 2.0 * (s - 1.0)), 0.25);
    double th = (kPi - std::atan(std::pow(mu, s - 1.0))) / 2.0;
    p.theta = branch == Branch::Upper ? th : -th;
    p.x = p.r * std::cos(p.theta);
    p.y = p.r * std::sin(p.theta);
    return p;
}

Vec2 wall_tangent(const CuspProfile& profile, double u) {
    if (u >= 0) throw std::domain_error("wall_tangent: u must be negative");
    double x = -u;
    double r = profile.wall_radius(x);
    double th = profile.wall_angle(x);
    double dr_du = -profile.wall_radius_d(x);
    // theta(x) = (pi - atan(P/x))/2, d atan(P/x)/dx = (P'x - P)/(x^2 + P^2)
    double P = profile.half_width(x);
    double Pd = profile.half_width_d(x);
    double datan_dx = (Pd * x - P) / (x * x + P * P);
    double dth_du = datan_dx / 2.0;  // chain: dtheta/dx = -datan/2, dx/du = -1
    double c = std::cos(th), s = std::sin(th);
    return {dr_du * c - r * s * dth_du, dr_du * s + r * c * dth_du};
}

namespace {

ClosingArc solve_closing_arc(const CuspProfile& profile) {
    CuspArcPoint zp = ellm_point(profile.expo, -1.0, Branch::Upper);
    // This routine only runs for the pure power family (coeff == 1), where the
    // wall parametrization by u matches the profile directly.
    Vec2 z1{zp.x, zp.y};
    Vec2 t = wall_tangent(profile, -1.0);
    Vec2 n{-t.y, t.x};
    if (std::fabs(n.y) < 1e-12 * norm(n))
        throw std::runtime_error("closing arc: wall normal nearly parallel to real axis");
    double nu = -z1.y / n.y;
    ClosingArc arc;
    arc.cx = z1.x + nu * n.x;
    arc.radius = dist({arc.cx, 0.0}, z1);
    arc.psi1 = std::atan2(z1.y, z1.x - arc.cx);
    if (arc.psi1 < 0) arc.psi1 += 2 * kPi;
    if (arc.psi1 >= kPi)
        throw std::runtime_error("closing arc: degenerate span");
    // Star-shapedness about the origin needs the arc's polar angle monotone.
    if (arc.cx * std::cos(arc.psi1) + arc.radius <= 0)
        throw std::runtime_error("closing arc: domain not star-shaped about the cusp tip");
    return arc;
}

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0) return dist(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

int orient_sign(Vec2 p, Vec2 q, Vec2 r) {
    double v = cross(q - p, r - p);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

struct SegmentGrid {
    double cell = 1.0;
    std::unordered_map<long long, std::vector<int>> bins;

    long long key(long long ix, long long iy) const { return ix * 2000003LL + iy; }
    void insert(int idx, Vec2 a, Vec2 b) {
        long long x0 = (long long)std::floor(std::min(a.x, b.x) / cell);
        long long x1 = (long long)std::floor(std::max(a.x, b.x) / cell);
        long long y0 = (long long)std::floor(std::min(a.y, b.y) / cell);
        long long y1 = (long long)std::floor(std::max(a.y, b.y) / cell);
        for (long long ix = x0; ix <= x1; ++ix)
            for (long long iy = y0; iy <= y1; ++iy) bins[key(ix, iy)].push_back(idx);
    }
    template <class F>
    void for_candidates(Vec2 a, Vec2 b, F&& f) const {
        long long x0 = (long long)std::floor(std::min(a.x, b.x) / cell);
        long long x1 = (long long)std::floor(std::max(a.x, b.x) / cell);
        long long y0 = (long long)std::floor(std::min(a.y, b.y) / cell);
        long long y1 = (long long)std::floor(std::max(a.y, b.y) / cell);
        for (long long ix = x0; ix <= x1; ++ix)
            for (long long iy = y0; iy <= y1; ++iy) {
                auto it = bins.find(key(ix, iy));
                if (it == bins.end()) continue;
                for (int idx : it->second) f(idx);
            }
    }
};

}  // namespace

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    int o1 = orient_sign(a, b, c), o2 = orient_sign(a, b, d);
    int o3 = orient_sign(c, d, a), o4 = orient_sign(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

bool any_segment_pair_crosses(const std::vector<std::array<Vec2, 2>>& segs) {
    if (segs.size() < 2) return false;
    double maxlen = 0;
    for (const auto& s : segs) maxlen = std::max(maxlen, dist(s[0], s[1]));
    SegmentGrid grid;
    grid.cell = std::max(maxlen, 1e-12);
    for (int i = 0; i < (int)segs.size(); ++i) grid.insert(i, segs[i][0], segs[i][1]);
    bool hit = false;
    for (int i = 0; i < (int)segs.size() && !hit; ++i) {
        grid.for_candidates(segs[i][0], segs[i][1], [&](int j) {
            if (hit || j <= i) return;
            if (segments_cross(segs[i][0], segs[i][1], segs[j][0], segs[j][1])) hit = true;
        });
    }
    return hit;
}

bool polyline_self_intersects(const std::vector<Vec2>& pts) {
    int n = (int)pts.size();
    if (n < 4) return false;
    double maxlen = 0;
    for (int i = 0; i < n; ++i) maxlen = std::max(maxlen, dist(pts[i], pts[(i + 1) % n]));
    SegmentGrid grid;
    grid.cell = std::max(maxlen, 1e-9);
    for (int i = 0; i < n; ++i) grid.insert(i, pts[i], pts[(i + 1) % n]);
    bool hit = false;
    for (int i = 0; i < n && !hit; ++i) {
        Vec2 a = pts[i], b = pts[(i + 1) % n];
        grid.for_candidates(a, b, [&](int j) {
            if (hit || j <= i) return;
            // adjacent segments share an endpoint
            if (j == i + 1 || (i == 0 && j == n - 1)) return;
            if (segments_cross(a, b, pts[j], pts[(j + 1) % n])) hit = true;
        });
    }
    return hit;
}

BoundaryCurve BoundaryCurve::build(double s, int min_vertices) {
    if (s <= 1) throw std::domain_error("cusp degree must exceed 1");
    BoundaryCurve bc;
    bc.s_ = s;
    bc.profile_ = CuspProfile{1.0, s};
    bc.arc_ = solve_closing_arc(bc.profile_);
    CuspArcPoint zp = ellm_point(s, -1.0, Branch::Upper);
    bc.z1_ = {zp.x, zp.y};
    bc.max_radius_ = std::max(norm(bc.z1_), bc.arc_.cx + bc.arc_.radius);

    // Sample counterclockwise: arc from -psi1 to psi1, then the upper wall
    // inward to the tip, then the lower wall back out to z2.
    int n_arc = std::max(min_vertices / 3, 1024);
    int n_wall = std::max(min_vertices / 3, 2048);
    auto& pts = bc.polyline_;
    pts.reserve(n_arc + 2 * n_wall);
    for (int i = 0; i < n_arc; ++i) {
        double psi = -bc.arc_.psi1 + (2.0 * bc.arc_.psi1) * i / n_arc;
        pts.push_back(bc.arc_.point(psi));
    }
    // Quadratic grading so vertex spacing shrinks like sqrt(-u) near the tip;
    // near the cusp (|z| <= 0.25) spacing stays under 1e-4.
    auto wall_point = [&](double u, Branch b) {
        CuspArcPoint p = ellm_point(s, u, b);
        return Vec2{p.x, p.y};
    };
    std::vector<double> grading(n_wall + 1);
    for (int i = 0; i <= n_wall; ++i) {
        double q = double(i) / n_wall;
        grading[i] = -(1.0 - q) * (1.0 - q);
    }
    for (int i = 0; i < n_wall; ++i) pts.push_back(wall_point(grading[i], Branch::Upper));
    pts.push_back({0.0, 0.0});
    for (int i = n_wall - 1; i > 0; --i) pts.push_back(wall_point(grading[i], Branch::Lower));
    // refine any coarse spots near the cusp
    std::vector<Vec2> refined;
    refined.reserve(pts.size() * 2);
    int n = (int)pts.size();
    for (int i = 0; i < n; ++i) {
        Vec2 a = pts[i], b = pts[(i + 1) % n];
        refined.push_back(a);
        double lim = (norm(a) < 0.25 || norm(b) < 0.25) ? 1e-4 : 2e-3;
        double d = dist(a, b);
        if (d > lim) {
            int extra = std::min(64, (int)std::ceil(d / lim) - 1);
            for (int k = 1; k <= extra; ++k) refined.push_back(a + (double(k) / (extra + 1)) * (b - a));
        }
    }
    bc.polyline_ = std::move(refined);
    return bc;
}

double BoundaryCurve::radial_extent(double theta) const {
    double th = std::fabs(theta);
    if (th >= kPi / 2) return 0.0;
    double best = 0.0;
    // closing-arc candidate
    double st = std::sin(th);
    double disc = arc_.radius * arc_.radius - arc_.cx * arc_.cx * st * st;
    if (disc >= 0) {
        double rho = arc_.cx * std::cos(th) + std::sqrt(disc);
        if (rho > 0) {
            Vec2 p{rho * std::cos(th), rho * st};
            double psi = std::atan2(p.y, p.x - arc_.cx);
            if (std::fabs(psi) <= arc_.psi1 + 1e-14) best = std::max(best, rho);
        }
    }
    // wall candidate: wall_angle(x) = theta  =>  coeff * x^{expo-1} = tan(pi-2*theta)
    double theta_end = profile_.wall_angle(1.0);
    if (th >= theta_end && th < kPi / 2) {
        double tn = std::tan(kPi - 2.0 * th);
        if (tn > 0) {
            double x = std::pow(tn / profile_.coeff, 1.0 / (profile_.expo - 1.0));
            if (x <= 1.0) best = std::max(best, profile_.wall_radius(x));
        }
    }
    return best;
}

bool BoundaryCurve::contains_analytic(Vec2 z) const {
    double rho = norm(z);
    if (rho == 0) return false;  // tip is boundary
    double th = std::atan2(z.y, z.x);
    if (std::fabs(th) >= kPi / 2) return false;
    double rm = radial_extent(th);
    return rho < rm;
}

Location BoundaryCurve::locate(Vec2 z, double tol) const {
    // boundary band against the sampled polyline
    int n = (int)polyline_.size();
    double rho = norm(z);
    if (rho <= tol) return Location::Boundary;
    double dmin = 1e300;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = polyline_[i];
        // prune: skip far vertices quickly
        if (std::fabs(a.x - z.x) > dmin + 0.01 || std::fabs(a.y - z.y) > dmin + 0.01) continue;
        dmin = std::min(dmin, point_segment_dist(z, a, polyline_[(i + 1) % n]));
        if (dmin <= tol) return Location::Boundary;
    }
    // even-odd ray crossing, horizontal ray toward +x
    bool inside = false;
    for (int i = 0; i < n; ++i) {
        Vec2 a = polyline_[i], b = polyline_[(i + 1) % n];
        if ((a.y > z.y) != (b.y > z.y)) {
            double xi = a.x + (z.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xi > z.x) inside = !inside;
        }
    }
    return inside ? Location::Inside : Location::Outside;
}

Location BoundaryCurve::locate_squared(Vec2 w, double tol) const {
    double rho = std::hypot(w.x, w.y);
    if (rho <= tol) return Location::Boundary;
    double half = std::atan2(w.y, w.x) / 2.0;
    double rr = std::sqrt(rho);
    Vec2 root{rr * std::cos(half), rr * std::sin(half)};
    Location l1 = locate(root, tol);
    if (l1 == Location::Inside) return Location::Inside;
    Location l2 = locate({-root.x, -root.y}, tol);
    if (l2 == Location::Inside) return Location::Inside;
    if (l1 == Location::Boundary || l2 == Location::Boundary) return Location::Boundary;
    return Location::Outside;
}

double cardioid_defining(Vec2 w) {
    double q = w.x * w.x + w.y * w.y;
    return q * q - 4.0 * w.x * q - 4.0 * w.y * w.y;
}

double cardioid_d(double x) {
    if (1.0 + 2.0 * x <= 0) throw std::domain_error("cardioid_d: 1 + 2x must be positive");
    if (x > 0) throw std::domain_error("cardioid_d: x must be nonpositive");
    // near-cusp root of the defining quartic in y^2, rationalized
    return -x * x * x * (4.0 - x) / (2.0 + 2.0 * x - x * x + 2.0 * std::sqrt(1.0 + 2.0 * x));
}

CardioidLocalData fit_cardioid_constants(int j0, int samples) {
    CardioidLocalData data;
    data.j0 = j0;
    double x0 = -std::pow(2.0, -j0);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= samples; ++i) {
        double x = x0 * (1.0 - double(i) / samples);  // from x0 up to 0
        double ratio;
        if (x == 0.0) {
            ratio = 1.0;  // limit of d(x)/|x|^3
        } else {
            ratio = cardioid_d(x) / (-x * x * x);
        }
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    data.c1 = lo;
    data.c2 = hi;
    return data;
}

}  // namespace cuspext
