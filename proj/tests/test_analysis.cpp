#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cuspext/probes.hpp"
#include "cuspext/quadrature.hpp"

using namespace cuspext;

TEST_CASE("gauss-legendre nodes") {
    const auto& nw = gauss_legendre(8);
    double total = 0, cubic = 0, deg15 = 0;
    for (const auto& [x, w] : nw) {
        total += w;
        cubic += w * x * x * x;
        deg15 += w * std::pow(x, 15);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cubic == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(deg15 == doctest::Approx(1.0 / 16).epsilon(1e-13));
}

TEST_CASE("finite-difference derivative") {
    Mat2 id = jacobian_fd([](Vec2 z) { return z; }, {0.3, -0.2}, 1e-5);
    CHECK(std::fabs((double)id.a11 - 1) < 1e-11);
    CHECK(std::fabs((double)id.a22 - 1) < 1e-11);
    CHECK(std::fabs((double)id.a12) < 1e-11);
    Mat2 sq = jacobian_fd([](Vec2 z) { return Vec2{z.x * z.x - z.y * z.y, 2 * z.x * z.y}; },
                          {1.0, 0.0}, 1e-6, true);
    CHECK(std::fabs((double)sq.a11 - 2) < 1e-9);
    CHECK(std::fabs((double)sq.a22 - 2) < 1e-9);
    CHECK(std::fabs((double)sq.a12) < 1e-9);
    CHECK(std::fabs((double)sq.a21) < 1e-9);
}

TEST_CASE("distortion agrees with the singular-value ratio") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int found = 0;
    while (found < 200) {
        Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        if (m.det() <= 0.05) continue;
        ++found;
        Svd2 sv = svd2(m);
        long double k1 = sv.smax / sv.smin;
        long double k2 = sv.smax * sv.smax / m.det();
        CHECK((double)(fabsl(k1 - k2) / k1) < 1e-10);
        DistortionSample ds = make_distortion_sample({0, 0}, m);
        CHECK((double)ds.K >= 1.0);
    }
}

TEST_CASE("cell integrals transport area") {
    CuspProfile pr{1.0, 1.5};
    QuadratureParams qp;
    for (int j : {6, 8}) {
        CellMap cm = make_cell_map(pr, std::pow(2.0, -j), false);
        // integral of |J_F| over the annular cell equals the flat cell area
        CellIntegral ci = integrate_cell(cm, Quantity::Jf, 1.0, qp);
        CHECK(ci.converged);
        CHECK(std::fabs((double)(ci.value - cm.target_area())) < 1e-6 * cm.target_area());
        // zero exponent gives plain measure; cross-check with Monte Carlo
        CellIntegral area = integrate_cell(cm, Quantity::Kf, 0.0, qp);
        std::mt19937_64 rng(100 + j);
        const CellScale& cs = cm.scale();
        std::uniform_real_distribution<double> ux(-cs.L2, cs.L2);
        int nmc = 1000000, inside = 0;
        for (int i = 0; i < nmc; ++i) {
            Vec2 z{ux(rng), ux(rng)};
            if (cm.contains(z, 0.0)) ++inside;
        }
        double box = 4.0 * cs.L2 * cs.L2;
        double phat = double(inside) / nmc;
        double mc = phat * box;
        double sigma3 = 3.0 * box * std::sqrt(phat * (1 - phat) / nmc);
        CHECK(std::fabs((double)area.value - mc) < sigma3);
    }
}

TEST_CASE("quadrature self-consistency under refinement") {
    CuspProfile pr{1.0, 1.5};
    CellMap cm = make_cell_map(pr, 1.0 / 256, false);
    QuadratureParams qp;
    CellIntegral base = integrate_cell(cm, Quantity::Kf, 2.0, qp);
    QuadratureParams finer = qp;
    finer.start_level = qp.start_level + 1;
    CellIntegral fine = integrate_cell(cm, Quantity::Kf, 2.0, finer);
    CHECK(std::fabs((double)((base.value - fine.value) / fine.value)) < 1e-4);
}

TEST_CASE("dyadic series headline slopes") {
    CuspProfile pr{1.0, 1.5};
    CellFamily fam{pr, false, {}};
    QuadratureParams qp;
    SeriesReport crit = dyadic_series(fam, Quantity::Kf, 2.0, 6, 12, qp);
    CHECK(std::fabs(crit.slope) < 0.15);
    CHECK(crit.verdict == "critical");
    SeriesReport dinv = dyadic_series(fam, Quantity::Dfinv, 2.0, 6, 12, qp);
    CHECK(std::fabs(dinv.slope + 1.0) < 0.15);
    CHECK(dinv.verdict == "converges");
    // |J| partial sums stay under the flat region measure
    SeriesReport jm = dyadic_series(fam, Quantity::Jf, 1.0, 6, 12, qp);
    long double bound = 0;
    for (int j = 6; j <= 12; ++j) bound += fam.cell_index(j).target_area();
    long double total = 0;
    for (auto v : jm.integrals) total += v;
    CHECK((double)total <= (double)bound * (1 + 1e-9));
    for (size_t i = 0; i + 1 < jm.integrals.size(); ++i) CHECK(jm.integrals[i + 1] < jm.integrals[i]);
}

TEST_CASE("series monotone in the exponent") {
    CuspProfile pr{1.0, 1.5};
    CellFamily fam{pr, false, {}};
    QuadratureParams qp;
    CellMap cm = fam.cell_index(8);
    long double prev = 0;
    for (double q : {0.5, 1.0, 1.5, 2.0}) {
        CellIntegral ci = integrate_cell(cm, Quantity::Kf, q, qp);
        CHECK((double)ci.value >= (double)prev * 0.999);
        prev = ci.value;
    }
}

TEST_CASE("verdict stable under range shifts") {
    CuspProfile pr{1.0, 1.5};
    CellFamily fam{pr, false, {}};
    QuadratureParams qp;
    SeriesReport a = dyadic_series(fam, Quantity::Kf, 1.6, 6, 12, qp);
    SeriesReport b = dyadic_series(fam, Quantity::Kf, 1.6, 8, 14, qp);
    CHECK(a.verdict == b.verdict);
    CHECK(a.verdict == "converges");
    SeriesReport c = dyadic_series(fam, Quantity::Kf, 2.4, 6, 12, qp);
    SeriesReport d = dyadic_series(fam, Quantity::Kf, 2.4, 8, 14, qp);
    CHECK(c.verdict == d.verdict);
    CHECK(c.verdict == "diverges");
}

TEST_CASE("critical exponent scans") {
    CuspProfile pr{1.0, 1.5};
    CellFamily fam{pr, false, {}};
    QuadratureParams qp;
    ScanResult kf = critical_exponent_scan(fam, Quantity::Kf, 0.6, 4.4, 6, 12, qp);
    CHECK(kf.ok);
    CHECK(std::fabs(kf.exponent - 2.0) < 0.1);
    ScanResult kinv = critical_exponent_scan(fam, Quantity::Kfinv, 2.0, 8.0, 6, 12, qp);
    CHECK(kinv.ok);
    CHECK(std::fabs(kinv.exponent - 5.0) < 0.25);
    ScanResult dinv = critical_exponent_scan(fam, Quantity::Dfinv, 1.4, 4.0, 6, 12, qp);
    CHECK(dinv.ok);
    CHECK(std::fabs(dinv.exponent - 2.5) < 0.1);
    // no sign change inside the bracket
    ScanResult bad = critical_exponent_scan(fam, Quantity::Kf, 2.4, 4.0, 6, 10, qp);
    CHECK_FALSE(bad.ok);
}

TEST_CASE("closed-form thresholds") {
    ThresholdSet t = thresholds(Rational(3, 2));
    CHECK(t.q_distortion == Rational(2));
    CHECK(t.p_inverse_gradient == Rational(5, 2));
    CHECK(t.q_inverse_distortion == Rational(5));
    ThresholdSet t2 = thresholds(Rational(2));
    CHECK(t2.q_distortion == Rational(1));
    ThresholdSet big = thresholds(Rational(1000));
    CHECK(big.q_distortion == Rational(1));
    CHECK(big.q_inverse_distortion.value() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(big.p_inverse_gradient.value() == doctest::Approx(1.0).epsilon(0.01));
    ThresholdSet comb = thresholds(Rational(3), Rational(2));
    REQUIRE(comb.q_combined.has_value());
    CHECK(*comb.q_combined == Rational(3, 4));
    CHECK(sobolev_transfer_exponent(Rational(2), Rational(1)) == Rational(2));
    CHECK_THROWS_AS(thresholds(Rational(1)), std::domain_error);
}

TEST_CASE("strip ramp field") {
    CuspProfile pr{1.0, 1.5};
    double t = 1.0 / 64;
    CHECK(strip_ramp_value(pr, t, {-0.5, 0.0}) == 1.0);
    CHECK(strip_ramp_value(pr, t, {-t * t / 8, 0.0}) == 0.0);
    CHECK(strip_ramp_value(pr, t, {-t * t, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(strip_ramp_value(pr, t, {-t * t / 4, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    // quadrature energy against the closed form 2/denominator
    double s = 1.5;
    double denom = (std::pow(t * t / 4, 1 - s) - std::pow(t * t, 1 - s)) / (s - 1);
    CHECK(strip_energy(pr, t) == doctest::Approx(2.0 / denom).epsilon(1e-10));
    // scaling exponent
    CHECK(strip_energy_exponent(pr, 6, 12) == doctest::Approx(2 * (s - 1)).epsilon(0.01));
    CuspProfile pr2{1.0, 2.0};
    CHECK(strip_energy_exponent(pr2, 6, 12) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("annulus distance field") {
    CuspProfile pr{1.0, 1.5};
    double lo = 1e300, hi = 0;
    for (int j = 6; j <= 10; ++j) {
        AnnulusProbe probe = annulus_distance_energy(pr, std::pow(2.0, -j));
        CHECK(probe.ok);
        CHECK(probe.min_far_wall >= 1.0);
        CHECK(probe.energy > 0);
        lo = std::min(lo, probe.energy);
        hi = std::max(hi, probe.energy);
    }
    CHECK(hi / lo <= 2.0);
}

TEST_CASE("inverse oscillation stays on the square-root scale") {
    CuspProfile pr{1.0, 1.5};
    CellFamily fam{pr, false, {}};
    auto pts = oscillation_profile(fam, 6, 12);
    double lo = 1e300, hi = 0;
    for (const auto& p : pts) {
        lo = std::min(lo, p.normalized);
        hi = std::max(hi, p.normalized);
    }
    CHECK(hi / lo <= 4.0);
    // the borderline integrand exponent: p/2 - s(p-1) = -1 at the inverse
    // gradient threshold, and -1/2 at p = 2 for degree 3/2
    Rational s(3, 2);
    Rational p = Rational(2) * (s + Rational(1)) / (Rational(2) * s - Rational(1));
    Rational expo = p / Rational(2) - s * (p - Rational(1));
    CHECK(expo == Rational(-1));
    Rational expo2 = Rational(2) / Rational(2) - s * (Rational(2) - Rational(1));
    CHECK(expo2 == Rational(-1, 2));
}

TEST_CASE("rational helpers") {
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("5") == Rational(5));
    CHECK(Rational(4, 8) == Rational(1, 2));
    CHECK(rational_max(Rational(1), Rational(4, 3)) == Rational(4, 3));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK_THROWS(Rational(1, 0));
}
