// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cuspext/extension.hpp"
#include "cuspext/probes.hpp"
#include "cuspext/quadrature.hpp"
#include "cuspext/verify.hpp"

using namespace cuspext;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

Vec2 csq(Vec2 z) { return {z.x * z.x - z.y * z.y, 2.0 * z.x * z.y}; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

bool slope_triplet(const CellFamily& fam, Quantity q, const std::vector<double>& exps,
                   const std::vector<double>& want, int jmin, int jmax, double tol,
                   std::string& detail) {
    QuadratureParams qp;
    bool ok = true;
    for (size_t i = 0; i < exps.size(); ++i) {
        SeriesReport rep = dyadic_series(fam, q, exps[i], jmin, jmax, qp);
        ok = ok && std::fabs(rep.slope - want[i]) <= tol;
        detail += quantity_name(q) + "[" + fmt(exps[i]) + "]=" + fmt(rep.slope) + " ";
    }
    return ok;
}

struct ScanSpec {
    Quantity q;
    double lo, hi, want, tol;
};

bool scans_ok(const CellFamily& fam, const std::vector<ScanSpec>& specs, int jmin, int jmax,
              std::string& detail) {
    QuadratureParams qp;
    bool ok = true;
    for (const auto& spec : specs) {
        ScanResult res = critical_exponent_scan(fam, spec.q, spec.lo, spec.hi, jmin, jmax, qp);
        bool good = res.ok && std::fabs(res.exponent - spec.want) <= spec.tol;
        ok = ok && good;
        detail += quantity_name(spec.q) + "*=" + (res.ok ? fmt(res.exponent) : "n/a") + " ";
    }
    return ok;
}

const VerifyCheck* find_check(const VerifyReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

int main() {
    // ---- criterion 1: closed-form thresholds -------------------------------
    {
        ThresholdSet t = thresholds(Rational(3, 2));
        bool ok = t.q_distortion == Rational(2) && t.p_inverse_gradient == Rational(5, 2) &&
                  t.q_inverse_distortion == Rational(5);
        for (Rational s : {Rational(5, 4), Rational(3, 2), Rational(2), Rational(3)}) {
            ThresholdSet ts = thresholds(s, Rational(2));
            Rational sm1 = s - Rational(1);
            ok = ok && ts.q_distortion == rational_max(Rational(1), Rational(1) / sm1);
            ok = ok && ts.p_inverse_gradient ==
                           Rational(2) * (s + Rational(1)) / (Rational(2) * s - Rational(1));
            ok = ok && ts.q_inverse_distortion == (s + Rational(1)) / sm1;
            Rational denom =
                (Rational(2) * s - Rational(1)) * Rational(2) + Rational(4) - Rational(2) * s;
            ok = ok && *ts.q_combined == rational_max(Rational(1) / sm1, Rational(6) / denom);
        }
        ok = ok && sobolev_transfer_exponent(Rational(2), Rational(1)) == Rational(2);
        report(1, "threshold formulas exact",
               ok, "s=3/2 -> (2, 5/2, 5); four formulas match on {5/4,3/2,2,3}");
    }

    CuspProfile p32{1.0, 1.5};
    CellFamily plain{p32, false, {}};

    // ---- criterion 2: distortion slopes ------------------------------------
    {
        std::string detail;
        bool ok = slope_triplet(plain, Quantity::Kf, {1, 2, 3}, {-1, 0, 1}, 6, 14, 0.15, detail);
        report(2, "distortion mass slopes at degree 3/2", ok, detail + "target -1,0,+1 +/-0.15");
    }

    // ---- criterion 3: inverse distortion slopes ----------------------------
    {
        std::string detail;
        bool ok =
            slope_triplet(plain, Quantity::Kfinv, {3, 5, 7}, {-2, 0, 2}, 6, 14, 0.15, detail);
        report(3, "inverse distortion slopes", ok, detail + "target -2,0,+2 +/-0.15");
    }

    // ---- criterion 4: inverse gradient slopes + the three scans ------------
    {
        std::string detail;
        bool ok =
            slope_triplet(plain, Quantity::Dfinv, {2, 2.5, 3}, {-1, 0, 1}, 6, 14, 0.15, detail);
        bool ok2 = scans_ok(plain,
                            {{Quantity::Kf, 0.6, 4.4, 2.0, 0.1},
                             {Quantity::Kfinv, 2.0, 8.0, 5.0, 0.25},
                             {Quantity::Dfinv, 1.4, 4.0, 2.5, 0.1}},
                            6, 14, detail);
        report(4, "inverse gradient slopes and critical scans", ok && ok2,
               detail + "targets 2.0/5.0/2.5");
    }

    // ---- criterion 5: squeezed construction, exponential law ---------------
    {
        CellFamily squeezed{p32, true, {}};
        QuadratureParams qp;
        SeriesReport mass = dyadic_series(squeezed, Quantity::Df, 1.0, 6, 12, qp);
        bool ok1 = std::fabs(mass.slope + 3.0) <= 0.2;
        SeriesReport kq = dyadic_series(squeezed, Quantity::Kf, 0.9, 6, 12, qp);
        long double partial = 0;
        for (auto v : kq.integrals) partial += v;
        bool ok2 = (double)(kq.integrals.back() / partial) < 1e-3;
        report(5, "squeezed construction mass and sub-unit distortion sums", ok1 && ok2,
               "|DF| slope=" + fmt(mass.slope) + " (target -3 +/-0.2), last/sum=" +
                   fmt((double)(kq.integrals.back() / partial)));
    }

    // ---- criterion 6: power-log squeeze at degree 3 -------------------------
    {
        CuspProfile p3{1.0, 3.0};
        SqueezeParams sp;
        sp.mode = SqueezeParams::Mode::PowerLog;
        sp.p = 2.0;
        CellFamily fam{p3, true, sp};
        QuadratureParams qp;
        SeriesReport mass = dyadic_series(fam, Quantity::Df, 2.0, 6, 12, qp);
        long double lo = 1e300L, hi = 0, partial = 0;
        for (size_t i = 0; i < mass.integrals.size(); ++i) {
            long double scaled = mass.integrals[i] * powl((long double)(6 + i), 2.0L);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
            partial += mass.integrals[i];
        }
        bool ok1 = (double)(hi / lo) < 4.0;
        ScanResult scan = critical_exponent_scan(fam, Quantity::Kf, 0.4, 1.15, 6, 12, qp);
        bool ok2 = scan.ok && std::fabs(scan.exponent - 0.75) <= 0.1;
        report(6, "power-log squeeze: bounded gradient mass, combined critical near 3/4",
               ok1 && ok2,
               "term*j^2 spread=" + fmt((double)(hi / lo)) +
                   ", scan=" + (scan.ok ? fmt(scan.exponent) : "n/a"));
    }

    // ---- criterion 7: structural exactness ----------------------------------
    {
        Scenario sc;
        sc.s = 1.5;
        VerifyReport rep = run_verification(sc, 0, false);
        Scenario sq = sc;
        sq.construction = ConstructionKind::Squeezed;
        VerifyReport rep2 = run_verification(sq, 0, false);
        struct Want {
            const VerifyReport* rep;
            const char* name;
        };
        std::vector<Want> wants = {
            {&rep, "wall compatibility with the square map"},
            {&rep, "dyadic interface continuity"},
            {&rep, "analytic vs finite-difference derivatives"},
            {&rep, "orientation (determinant positive)"},
            {&rep, "grid injectivity over the square window"},
            {&rep, "rim continuity (cells vs outer blend)"},
            {&rep, "conformal boundary continuity (square vs outer blend)"},
            {&rep2, "trapezoid interface continuity"},
            {&rep2, "wall compatibility with the square map"},
        };
        bool ok = true;
        std::string detail;
        for (const auto& w : wants) {
            const VerifyCheck* c = find_check(*w.rep, w.name);
            if (!c || !c->pass) {
                ok = false;
                detail += std::string("FAILED: ") + w.name + " ";
            }
        }
        if (ok) {
            const VerifyCheck* wall = find_check(rep, "wall compatibility with the square map");
            const VerifyCheck* iface = find_check(rep, "dyadic interface continuity");
            const VerifyCheck* trap = find_check(rep2, "trapezoid interface continuity");
            detail = "wall=" + fmt(wall->measured) + " iface=" + fmt(iface->measured) +
                     " trapezoid=" + fmt(trap->measured);
        }
        report(7, "structural exactness (compatibility, interfaces, derivatives, injectivity)",
               ok, detail);
    }

    // ---- criterion 8: test-field scalings ------------------------------------
    {
        bool ok = true;
        std::string detail;
        for (double s : {1.5, 2.0}) {
            CuspProfile pr{1.0, s};
            double e = strip_energy_exponent(pr, 6, 12);
            ok = ok && std::fabs(e - 2 * (s - 1)) <= 0.1;
            detail += "strip(s=" + fmt(s) + ")=" + fmt(e) + " ";
        }
        double lo = 1e300, hi = 0;
        for (int j = 6; j <= 10; ++j) {
            AnnulusProbe probe = annulus_distance_energy(p32, std::pow(2.0, -j));
            ok = ok && probe.ok;
            lo = std::min(lo, probe.energy);
            hi = std::max(hi, probe.energy);
        }
        ok = ok && hi / lo <= 2.0;
        detail += "annulus max/min=" + fmt(hi / lo) + " ";
        auto osc = oscillation_profile(plain, 6, 12);
        double olo = 1e300, ohi = 0;
        for (const auto& q : osc) {
            olo = std::min(olo, q.normalized);
            ohi = std::max(ohi, q.normalized);
        }
        ok = ok && ohi / olo <= 4.0;
        detail += "osc max/min=" + fmt(ohi / olo);
        report(8, "ramp, annulus and oscillation scalings", ok, detail);
    }

    // ---- criterion 9: standard cardioid specialization ----------------------
    {
        Scenario sc;
        sc.domain = DomainKind::Cardioid;
        sc.j0 = 6;
        PlaneExtension ext(sc);
        std::mt19937_64 rng(sc.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0;
        int hits = 0;
        while (hits < 1000) {
            Vec2 z{u(rng), u(rng)};
            if (std::hypot(z.x, z.y) >= 0.999) continue;
            ++hits;
            worst = std::max(worst, dist(cardioid_f0(ext, z), csq({z.x + 1.0, z.y})));
        }
        bool ok1 = worst <= 1e-12;
        double jump = 0;
        for (int i = 1; i < 500; ++i) {
            double phi = -kPi + 2 * kPi * i / 500.0;
            if (std::fabs(phi) > kPi - 0.05) continue;
            Vec2 in = cardioid_f0(ext, {(1 - 1e-9) * std::cos(phi), (1 - 1e-9) * std::sin(phi)});
            Vec2 out = cardioid_f0(ext, {(1 + 1e-9) * std::cos(phi), (1 + 1e-9) * std::sin(phi)});
            jump = std::max(jump, dist(in, out));
        }
        bool ok2 = jump <= 1e-8;

        CellFamily fam{ext.profile(), false, {}};
        std::string detail = "disk err=" + fmt(worst) + " jump=" + fmt(jump) + " ";
        bool ok3 = slope_triplet(fam, Quantity::Kf, {1, 2, 3}, {-1, 0, 1}, 6, 14, 0.15, detail) &&
                   slope_triplet(fam, Quantity::Kfinv, {3, 5, 7}, {-2, 0, 2}, 6, 14, 0.15, detail) &&
                   slope_triplet(fam, Quantity::Dfinv, {2, 2.5, 3}, {-1, 0, 1}, 6, 14, 0.15, detail);
        bool ok4 = scans_ok(fam,
                            {{Quantity::Kf, 0.6, 4.4, 2.0, 0.1},
                             {Quantity::Kfinv, 2.0, 8.0, 5.0, 0.25},
                             {Quantity::Dfinv, 1.4, 4.0, 2.5, 0.1}},
                            6, 14, detail);
        report(9, "cardioid specialization and its exponent suite", ok1 && ok2 && ok3 && ok4,
               detail);
    }

    if (failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
