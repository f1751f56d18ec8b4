#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cuspext/geometry.hpp"

using namespace cuspext;

namespace {

Vec2 csq(Vec2 z) { return {z.x * z.x - z.y * z.y, 2.0 * z.x * z.y}; }

// Independent point-in-polygon oracle (even-odd, horizontal ray).
bool ray_cross_oracle(const std::vector<Vec2>& poly, Vec2 p) {
    bool inside = false;
    int n = (int)poly.size();
    for (int i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xi > p.x) inside = !inside;
        }
    }
    return inside;
}

std::vector<Vec2> sample_boundary(double s, int n_wall, int n_arc) {
    std::vector<Vec2> poly;
    BoundaryCurve bc = BoundaryCurve::build(s, 1024);
    const ClosingArc& arc = bc.closing_arc();
    for (int i = 0; i < n_arc; ++i) {
        double psi = -arc.psi1 + 2 * arc.psi1 * i / n_arc;
        poly.push_back(arc.point(psi));
    }
    for (int i = 0; i < n_wall; ++i) {
        double q = double(i) / n_wall;
        double u = -(1.0 - q) * (1.0 - q);
        CuspArcPoint p = ellm_point(s, u, Branch::Upper);
        poly.push_back({p.x, p.y});
    }
    poly.push_back({0, 0});
    for (int i = n_wall - 1; i > 0; --i) {
        double q = double(i) / n_wall;
        double u = -(1.0 - q) * (1.0 - q);
        CuspArcPoint p = ellm_point(s, u, Branch::Lower);
        poly.push_back({p.x, p.y});
    }
    return poly;
}

}  // namespace

TEST_CASE("cusp curve points") {
    Vec2 p = ell1_point(1.5, -1.0, Branch::Upper);
    CHECK(p.x == doctest::Approx(-1.0));
    CHECK(p.y == doctest::Approx(1.0));
    p = ell1_point(1.5, 0.0, Branch::Upper);
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
    p = ell1_point(2.0, -0.5, Branch::Lower);
    CHECK(p.x == doctest::Approx(-0.5));
    CHECK(p.y == doctest::Approx(-0.25));
    CHECK_THROWS_AS(ell1_point(1.5, 0.5, Branch::Upper), std::domain_error);
    CHECK_THROWS_AS(ell1_point(1.5, -1.5, Branch::Upper), std::domain_error);
}

TEST_CASE("square-root plane curve points") {
    CuspArcPoint p = ellm_point(1.5, -1.0, Branch::Upper);
    CHECK(p.r == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
    CHECK(p.theta == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-14));
    CHECK(ellm_point(1.5, 0.0, Branch::Upper).r == 0.0);
    CHECK(ellm_point(3.0, 0.0, Branch::Lower).r == 0.0);

    // squaring reproduces the original curve
    CuspArcPoint q = ellm_point(1.5, -0.25, Branch::Upper);
    Vec2 sq = csq({q.x, q.y});
    CHECK(std::fabs(sq.x - (-0.25)) < 1e-12);
    CHECK(std::fabs(sq.y - std::pow(0.25, 1.5)) < 1e-12);
}

TEST_CASE("square round-trip across degrees and branches") {
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
        for (int i = 1; i <= 100; ++i) {
            double u = -double(i) / 100;
            for (Branch b : {Branch::Upper, Branch::Lower}) {
                CuspArcPoint p = ellm_point(s, u, b);
                Vec2 sq = csq({p.x, p.y});
                Vec2 ref = ell1_point(s, u, b);
                CHECK(dist(sq, ref) < 1e-12);
            }
        }
    }
}

TEST_CASE("wall radius decreases toward the tip") {
    for (double s : {1.25, 1.5, 2.0}) {
        double prev = ellm_point(s, -1e-3, Branch::Upper).r;
        for (int i = 1; i <= 50; ++i) {
            double u = -1e-3 * (1.0 - double(i) / 51);
            double r = ellm_point(s, u, Branch::Upper).r;
            CHECK(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("closing arc construction") {
    for (double s : {1.5, 2.0}) {
        BoundaryCurve bc = BoundaryCurve::build(s, 1024);
        const ClosingArc& arc = bc.closing_arc();
        Vec2 z1 = bc.z1();
        Vec2 z2{z1.x, -z1.y};
        CHECK(std::fabs(dist({arc.cx, 0.0}, z1) - arc.radius) < 1e-10);
        CHECK(std::fabs(dist({arc.cx, 0.0}, z2) - arc.radius) < 1e-10);

        // finite-difference tangent oracle for the tangency
        double h = 1e-7;
        CuspArcPoint pa = ellm_point(s, -1.0 + h, Branch::Upper);
        CuspArcPoint pb = ellm_point(s, -1.0, Branch::Upper);
        Vec2 tang{(pa.x - pb.x) / h, (pa.y - pb.y) / h};
        Vec2 radial = z1 - Vec2{arc.cx, 0.0};
        double c = std::fabs(dot(tang, radial)) / (norm(tang) * norm(radial));
        CHECK(c < 1e-6);

        // exact tangent is orthogonal to the radial direction
        Vec2 t = wall_tangent(bc.profile(), -1.0);
        CHECK(std::fabs(dot(t, radial)) / (norm(t) * norm(radial)) < 1e-12);
    }
}

TEST_CASE("boundary polyline is a simple symmetric curve") {
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
        BoundaryCurve bc = BoundaryCurve::build(s);
        CHECK(bc.polyline().size() >= 4096);
        CHECK_FALSE(polyline_self_intersects(bc.polyline()));
    }
}

TEST_CASE("point membership matches the sampled-polygon oracle") {
    BoundaryCurve bc = BoundaryCurve::build(1.5);
    std::vector<Vec2> oracle_poly = sample_boundary(1.5, 4000, 4000);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-1.0, 4.5), uy(-2.5, 2.5);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        Vec2 p{ux(rng), uy(rng)};
        Location loc = bc.locate(p, 1e-10);
        if (loc == Location::Boundary) continue;
        // skip points too close to the curve for the coarse oracle polygon
        bool analytic = bc.contains_analytic(p);
        double rm = bc.radial_extent(std::atan2(p.y, p.x));
        if (rm > 0 && std::fabs(norm(p) - rm) < 1e-3) continue;
        ++checked;
        CHECK(ray_cross_oracle(oracle_poly, p) == (loc == Location::Inside));
        CHECK(analytic == (loc == Location::Inside));
    }
    CHECK(checked > 300);
}

TEST_CASE("model domain membership examples") {
    BoundaryCurve bc = BoundaryCurve::build(1.5);
    CHECK(bc.locate({0.5, 0.0}) == Location::Inside);
    CHECK(bc.locate({-0.5, 0.0}) == Location::Outside);
    CHECK(bc.locate({0.0, 0.0}) == Location::Boundary);
}

TEST_CASE("squared-domain membership examples") {
    BoundaryCurve bc = BoundaryCurve::build(1.5);
    CHECK(bc.locate_squared({0.25, 0.0}) == Location::Inside);
    CHECK(bc.locate_squared({-0.01, 0.0}) == Location::Outside);
    CHECK(bc.locate_squared({0.0, 0.0}) == Location::Boundary);
}

TEST_CASE("cardioid defining polynomial") {
    CHECK(cardioid_defining({4.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cardioid_defining({1.0, 0.0}) == doctest::Approx(-3.0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * kPi);
    for (int i = 0; i < 100; ++i) {
        double phi = uphi(rng);
        Vec2 w = csq({1.0 + std::cos(phi), std::sin(phi)});
        CHECK(std::fabs(cardioid_defining(w)) < 1e-9);
    }
}

TEST_CASE("cardioid near-cusp thickness") {
    CHECK(cardioid_d(0.0) == 0.0);
    // substitution into the defining quartic
    for (double x : {-0.005, -0.001, -0.01, -0.015}) {
        double d = cardioid_d(x);
        CHECK(d > 0);
        CHECK(std::fabs(cardioid_defining({x, std::sqrt(d)})) < 1e-12);
        CHECK(std::fabs(cardioid_defining({x, -std::sqrt(d)})) < 1e-12);
    }
    // d(x) tracks |x|^3 with local constants near one
    double r = cardioid_d(-0.01) / 1e-6;
    CHECK(r > 0.99);
    CHECK(r < 1.05);
    CHECK_THROWS_AS(cardioid_d(-0.6), std::domain_error);
}

TEST_CASE("cardioid local constants") {
    CardioidLocalData data = fit_cardioid_constants(6);
    CHECK(data.c1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(data.c2 > data.c1);
    CHECK(data.c2 < 1.05);
    for (int i = 1; i <= 200; ++i) {
        double x = -std::pow(2.0, -6) * i / 200.0;
        double ratio = cardioid_d(x) / (-x * x * x);
        CHECK(ratio >= data.c1 - 1e-12);
        CHECK(ratio <= data.c2 + 1e-12);
    }
}

TEST_CASE("radial extent is continuous at the wall-arc junction") {
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
        BoundaryCurve bc = BoundaryCurve::build(s, 1024);
        double thz = std::atan2(bc.z1().y, bc.z1().x);
        double below = bc.radial_extent(thz - 1e-9);
        double above = bc.radial_extent(thz + 1e-9);
        CHECK(std::fabs(below - above) < 1e-6);
        CHECK(bc.radial_extent(0.0) == doctest::Approx(bc.closing_arc().cx + bc.closing_arc().radius));
    }
}
