#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cuspext/cells.hpp"
#include "cuspext/quadrature.hpp"
#include "cuspext/verify.hpp"

using namespace cuspext;

namespace {

Vec2 csq(Vec2 z) { return {z.x * z.x - z.y * z.y, 2.0 * z.x * z.y}; }

double mat_rel_diff(const Mat2& a, const Mat2& b) {
    double num = (double)(fabsl(a.a11 - b.a11) + fabsl(a.a12 - b.a12) + fabsl(a.a21 - b.a21) +
                          fabsl(a.a22 - b.a22));
    double den = (double)(fabsl(a.a11) + fabsl(a.a12) + fabsl(a.a21) + fabsl(a.a22));
    return num / den;
}

Vec2 wall_point(const CuspProfile& pr, double depth, double sign) {
    double ang = pr.wall_angle(depth);
    double r = pr.wall_radius(depth);
    return {r * std::cos(ang), sign * r * std::sin(ang)};
}

}  // namespace

TEST_CASE("wall radius profile") {
    CuspProfile p{1.0, 1.5};
    CHECK(p.wall_radius(1.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(p.wall_radius(1.0 / 256) ==
          doctest::Approx((1.0 / 16) * std::pow(257.0 / 256, 0.25)).epsilon(1e-15));
    CuspProfile p3{1.0, 3.0};
    CHECK(p3.wall_radius(1.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(p.wall_radius(0.0) == 0.0);
    CHECK_THROWS_AS(p.wall_radius(-1.0), std::domain_error);
}

TEST_CASE("wall radius derivative") {
    CuspProfile p{1.0, 1.5};
    CHECK(p.wall_radius_d(1.0) ==
          doctest::Approx(5.0 * std::pow(2.0, 0.25) / 8.0).epsilon(1e-14));
    CuspProfile p2{1.0, 2.0};
    double h = 1e-6;
    double fd = (p2.wall_radius(0.25 + h) - p2.wall_radius(0.25 - h)) / (2 * h);
    CHECK(std::fabs(p2.wall_radius_d(0.25) - fd) / fd < 1e-7);
    for (int i = 1; i <= 50; ++i) CHECK(p.wall_radius_d(double(i) / 50) > 0.0);
}

TEST_CASE("wall depth inversion") {
    CuspProfile p{1.0, 1.5};
    CHECK(p.wall_depth(0.0) == 0.0);
    CHECK(p.wall_depth(std::pow(2.0, 0.25)) == doctest::Approx(1.0).epsilon(1e-13));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(1e-6, 1.0);
    for (int i = 0; i < 100; ++i) {
        double x = ux(rng);
        CHECK(std::fabs(p.wall_depth(p.wall_radius(x)) - x) <= 1e-12 * std::max(1.0, x));
    }
    CuspProfile c{1.0, 1.5};  // cardioid-style profile has the same shape with coeff 1
    for (int i = 0; i < 20; ++i) {
        double x = ux(rng) * 0.01;
        CHECK(c.wall_depth(c.wall_radius(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("cell scale") {
    CuspProfile p{1.0, 1.5};
    CellScale cs = make_cell_scale(p, 0.125);
    CHECK(cs.L1 == doctest::Approx(p.wall_radius(1.0 / 256)).epsilon(1e-16));
    CHECK(cs.L2 == doctest::Approx(p.wall_radius(1.0 / 64)).epsilon(1e-16));
    CHECK(cs.sigma > 0);
    for (int j = 6; j <= 12; ++j) {
        CellScale c = make_cell_scale(p, std::pow(2.0, -j));
        CHECK(c.sigma / c.t > 0.4);
        CHECK(c.sigma / c.t < 0.6);
        CHECK(c.L2 / c.t > 0.9);
        CHECK(c.L2 / c.t < 1.1);
    }
    CHECK_THROWS_AS(make_cell_scale(p, 0.25), std::domain_error);
    CHECK_THROWS_AS(make_cell_scale(p, 0.0), std::domain_error);
}

TEST_CASE("flat cell corner lies on the profile") {
    CuspProfile p{1.0, 1.5};
    double t = 1.0 / 64;
    CellMap cm = make_cell_map(p, t, false);
    double corner = p.half_width(t * t);
    CHECK(corner == doctest::Approx(std::pow(t * t, 1.5)).epsilon(1e-16));
    CHECK(cm.target_contains({-t * t, corner}));
    CHECK(cm.target_contains({-t * t, -corner}));
    CHECK_FALSE(cm.target_contains({-t * t, corner * 1.01}));
}

TEST_CASE("gap angle") {
    CuspProfile p{1.0, 1.5};
    double t = 1.0 / 64;
    CellMap cm = make_cell_map(p, t, false);
    const CellScale& cs = cm.scale();
    CHECK(cm.gap_angle(cs.L2) ==
          doctest::Approx(kPi + std::atan(std::pow(t, 2 * 1.5 - 2))).epsilon(1e-13));
    CHECK(cm.gap_angle(cs.L1) ==
          doctest::Approx(kPi + std::atan(std::pow(t / 2, 2 * 1.5 - 2))).epsilon(1e-13));
    double prev = cm.gap_angle(cs.L1);
    for (int i = 1; i <= 64; ++i) {
        double r = cs.L1 + cs.sigma * i / 64.0;
        double g = cm.gap_angle(r);
        CHECK(g > kPi);
        CHECK(g <= kPi + kPi / 4 + 1e-12);
        CHECK(g > prev);
        CHECK(cm.gap_angle_d(r) > 0);
        prev = g;
    }
}

TEST_CASE("strip chart round trip and orientation") {
    CuspProfile p{1.0, 1.5};
    CellMap cm = make_cell_map(p, 1.0 / 64, false);
    const CellScale& cs = cm.scale();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (int i = 0; i < 100; ++i) {
        double x = cs.L1 + cs.sigma * u01(rng);
        double y = (u01(rng) - 0.5) * cs.sigma;
        Vec2 z = cm.source_from_strip(x, y);
        Vec2 back = cm.strip_from_source(z);
        CHECK(std::fabs(back.x - x) < 1e-12);
        CHECK(std::fabs(back.y - y) < 1e-12);
        // analytic strip determinant: -x * gap / sigma
        Mat2 m = cm.source_from_strip_jac(x, y);
        double want = -x * cm.gap_angle(x) / cs.sigma;
        CHECK(std::fabs((double)m.det() - want) < 1e-12 * std::fabs(want));
    }
    // symmetry axis and wall rays
    Vec2 axis = cm.source_from_strip(cs.L1, 0.0);
    CHECK(axis.x == doctest::Approx(-cs.L1));
    CHECK(std::fabs(axis.y) < 1e-18);
    Vec2 top = cm.source_from_strip(cs.L2, cs.sigma / 2);
    Vec2 want = wall_point(p, p.wall_depth(cs.L2), 1.0);
    CHECK(dist(top, want) < 1e-13);
}

TEST_CASE("spike flattening map") {
    CuspProfile p{1.0, 1.5};
    double t = 1.0 / 64;
    CellMap cm = make_cell_map(p, t, false);
    double B = p.half_width(t * t);
    Vec2 c1 = cm.spike_map({-t * t, B});
    CHECK(c1.x == doctest::Approx(t * t));
    CHECK(c1.y == doctest::Approx(B));
    Vec2 c2 = cm.spike_map({-t * t / 4, 0.0});
    CHECK(c2.x == doctest::Approx(t * t / 4));
    CHECK(c2.y == 0.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (int i = 0; i < 100; ++i) {
        double X = t * t * (0.25 + 0.75 * u01(rng));
        double v = (2 * u01(rng) - 1) * p.half_width(X);
        Vec2 w{-X, v};
        Mat2 an = cm.spike_jac(w);
        Mat2 fd = jacobian_fd([&](Vec2 q) { return cm.spike_map(q); }, w, 1e-7 * t * t, true);
        CHECK(mat_rel_diff(an, fd) < 1e-6);
        CHECK((double)an.det() < 0.0);
        Vec2 back = cm.spike_inv(cm.spike_map(w));
        CHECK(dist(back, w) < 1e-15);
    }
}

TEST_CASE("plain rectangle stage") {
    CuspProfile p{1.0, 1.5};
    for (int j : {6, 8, 10, 12}) {
        double t = std::pow(2.0, -j);
        CellScale cs = make_cell_scale(p, t);
        SimpleRectMap rm(p, cs);
        double B = p.half_width(t * t);
        Vec2 a = rm.from_rect(t * t / 4, -B);
        CHECK(a.x == doctest::Approx(cs.L1).epsilon(1e-14));
        CHECK(a.y == doctest::Approx(-cs.sigma / 2).epsilon(1e-14));
        Vec2 b = rm.from_rect(t * t, B);
        CHECK(b.x == doctest::Approx(cs.L2).epsilon(1e-14));
        CHECK(b.y == doctest::Approx(cs.sigma / 2).epsilon(1e-14));
        // distortion of the diagonal stage stays at the predicted scale
        for (double frac : {0.1, 0.5, 0.9}) {
            double X = t * t * (0.25 + 0.75 * frac);
            long double K = distortion(rm.from_rect_jac(X, 0.0));
            double scaled = (double)K * std::pow(t, 2 * 1.5 - 2.0);
            CHECK(scaled > 0.05);
            CHECK(scaled < 20.0);
        }
    }
}

TEST_CASE("cell map wall compatibility and axis") {
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
        CuspProfile p{1.0, s};
        double t = 1.0 / 128;
        CellMap cm = make_cell_map(p, t, false);
        for (int i = 1; i < 30; ++i) {
            double depth = t * t * (0.25 + 0.75 * i / 30.0);
            for (double sign : {1.0, -1.0}) {
                Vec2 z = wall_point(p, depth, sign);
                CHECK(dist(cm.map(z), csq(z)) < 1e-9);
            }
        }
        Vec2 axis = cm.map({-cm.scale().L2, 0.0});
        CHECK(axis.x == doctest::Approx(-t * t).epsilon(1e-12));
        CHECK(std::fabs(axis.y) < 1e-15);
    }
}

TEST_CASE("cell map inverse and derivative consistency") {
    CuspProfile p{1.0, 1.5};
    CellMap cm = make_cell_map(p, 1.0 / 64, false);
    const CellScale& cs = cm.scale();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (int i = 0; i < 100; ++i) {
        double rho = cs.L1 + cs.sigma * u01(rng);
        double gap = cm.gap_angle(rho);
        double th = kPi + gap * (u01(rng) - 0.5) * 0.9;
        Vec2 z{rho * std::cos(th), rho * std::sin(th)};
        Vec2 w = cm.map(z);
        CHECK(cm.target_contains(w, 1e-9));
        CHECK(dist(cm.inverse(w), z) < 1e-12 * cs.t);
        Mat2 an = cm.jacobian(z);
        Mat2 fd = jacobian_fd([&](Vec2 q) { return cm.map(q); }, z, 1e-7 * cs.t, true);
        CHECK(mat_rel_diff(an, fd) < 1e-6);
        CHECK((double)an.det() > 0.0);
        Mat2 inv_an = cm.inverse_jacobian(w);
        Mat2 prod = inv_an * an;
        CHECK(std::fabs((double)prod.a11 - 1.0) < 1e-9);
        CHECK(std::fabs((double)prod.a22 - 1.0) < 1e-9);
        CHECK(std::fabs((double)prod.a12) < 1e-9);
        CHECK(std::fabs((double)prod.a21) < 1e-9);
    }
}

TEST_CASE("cell map orientation across scales and degrees") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u01(0.02, 0.98);
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
        CuspProfile p{1.0, s};
        for (int j : {6, 9, 12, 14}) {
            CellMap cm = make_cell_map(p, std::pow(2.0, -j), false);
            PatchSample ps;
            for (int i = 0; i < 200; ++i) {
                cm.forward_sample(0, u01(rng), u01(rng), ps);
                CHECK((double)ps.deriv.det() > 0.0);
            }
        }
    }
}

TEST_CASE("cell map grid injectivity") {
    CuspProfile p{1.0, 1.5};
    CellMap cm = make_cell_map(p, 1.0 / 64, false);
    const CellScale& cs = cm.scale();
    int n = 64;
    std::vector<Vec2> img((size_t)(n + 1) * (n + 1));
    for (int k = 0; k <= n; ++k) {
        for (int i = 0; i <= n; ++i) {
            double rho = cs.L1 + cs.sigma * i / n;
            double gap = cm.gap_angle(rho);
            double th = kPi - gap / 2 + gap * k / n;
            img[(size_t)k * (n + 1) + i] = cm.map({rho * std::cos(th), rho * std::sin(th)});
        }
    }
    std::string why;
    CHECK(image_grid_injective(img, n + 1, n + 1, &why));
}

TEST_CASE("dyadic dispatch and interface continuity") {
    CuspProfile p{1.0, 1.5};
    DyadicExtension ext(p, 6, false);
    // strictly inside a cell
    for (int j = 6; j <= 12; ++j) {
        CellScale cs = make_cell_scale(p, std::pow(2.0, -j));
        double rho = 0.5 * (cs.L1 + cs.L2);
        CHECK(ext.dispatch_radius(rho) == j);
    }
    // interface points resolve to the outer cell
    for (int j = 7; j <= 12; ++j) {
        CellScale cs = make_cell_scale(p, std::pow(2.0, -j));
        CHECK(ext.dispatch_radius(cs.L2) == j - 1);
    }
    CHECK(ext.dispatch_radius(ext.outer_radius()) == 6);
    // continuity across cell circles
    for (int j = 6; j <= 11; ++j) {
        CellMap outer = ext.cell(j);
        CellMap inner = ext.cell(j + 1);
        double rho = outer.scale().L1;
        double gap = outer.gap_angle(rho);
        for (int i = 0; i <= 50; ++i) {
            double th = kPi - gap / 2 + gap * i / 50.0;
            Vec2 z{rho * std::cos(th), rho * std::sin(th)};
            CHECK(dist(outer.map(z), inner.map(z)) < 1e-9);
        }
    }
    // target-side dispatch
    for (int j = 6; j <= 12; ++j) {
        double depth = std::pow(2.0, -2.0 * j) * 0.5;
        CHECK(ext.dispatch_depth(depth) == j);
    }
    CHECK(ext.dispatch_depth(std::pow(2.0, -14.0)) == 6);  // deep edge of the first cell
}

TEST_CASE("dyadic map matches the square on the walls") {
    CuspProfile p{1.0, 1.5};
    DyadicExtension ext(p, 6, false);
    for (int j = 6; j <= 10; ++j) {
        double t = std::pow(2.0, -j);
        for (int i = 1; i < 10; ++i) {
            double depth = t * t * (0.25 + 0.75 * i / 10.0);
            Vec2 z = wall_point(p, depth, 1.0);
            CHECK(dist(ext.eval(z), csq(z)) < 1e-9);
        }
    }
}

TEST_CASE("tampered radius profile breaks wall compatibility") {
    CuspProfile good{1.0, 1.5};
    CuspProfile bad{1.02, 1.5};  // wrong wall: compatibility must fail loudly
    CellMap cm = make_cell_map(bad, 1.0 / 64, false);
    double worst = 0;
    for (int i = 1; i < 10; ++i) {
        double depth = (1.0 / 4096) * (0.25 + 0.75 * i / 10.0);
        Vec2 z = wall_point(good, depth, 1.0);
        worst = std::max(worst, dist(cm.map(z), csq(z)));
    }
    CHECK(worst > 1e-9);
}

TEST_CASE("sobolev and distortion scaling slopes") {
    CuspProfile p{1.0, 1.5};
    CellFamily fam{p, false, {}};
    QuadratureParams qp;
    double s = 1.5;
    SUBCASE("gradient mass") {
        for (double pe : {1.0, 2.0}) {
            SeriesReport rep = dyadic_series(fam, Quantity::Df, pe, 6, 12, qp);
            CHECK(std::fabs(rep.slope - (-(2.0 + pe))) < 0.2);
        }
    }
    SUBCASE("inverse gradient mass") {
        SeriesReport rep = dyadic_series(fam, Quantity::Dfinv, 2.0, 6, 12, qp);
        double want = -(2 * (s + 1) + 2.0 * (1 - 2 * s));
        CHECK(std::fabs(rep.slope - want) < 0.2);
    }
    SUBCASE("distortion") {
        SeriesReport rep = dyadic_series(fam, Quantity::Kf, 1.0, 6, 12, qp);
        CHECK(std::fabs(rep.slope - (2 * (1.0 * (s - 1) - 1))) < 0.2);
    }
    SUBCASE("inverse distortion") {
        SeriesReport rep = dyadic_series(fam, Quantity::Kfinv, 3.0, 6, 12, qp);
        CHECK(std::fabs(rep.slope - (2 * ((s - 1) * 3.0 - (s + 1)))) < 0.2);
    }
}
