#include "cuspext/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace cuspext {

std::string quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Kf: return "Kf";
        case Quantity::Kfinv: return "Kfinv";
        case Quantity::Df: return "Df";
        case Quantity::Dfinv: return "Dfinv";
        case Quantity::Jf: return "J";
    }
    return "?";
}

std::optional<Quantity> parse_quantity(const std::string& name) {
    if (name == "Kf") return Quantity::Kf;
    if (name == "Kfinv") return Quantity::Kfinv;
    if (name == "Df") return Quantity::Df;
    if (name == "Dfinv") return Quantity::Dfinv;
    if (name == "J") return Quantity::Jf;
    return std::nullopt;
}

bool quantity_is_inverse(Quantity q) { return q == Quantity::Kfinv || q == Quantity::Dfinv; }

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Newton on the Legendre polynomial, nodes mapped to [0,1]
    std::vector<std::pair<double, double>> nw(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nw[n - 1 - i] = {0.5 * (x + 1.0), 0.5 * w};
    }
    return cache.emplace(n, std::move(nw)).first->second;
}

DistortionSample make_distortion_sample(Vec2 point, const Mat2& jac) {
    DistortionSample s;
    s.point = point;
    s.jac = jac;
    Svd2 sv = svd2(jac);
    s.opnorm = sv.smax;
    s.det = jac.det();
    if (s.det > 0)
        s.K = sv.smin > 0 ? sv.smax / sv.smin : std::numeric_limits<long double>::infinity();
    else if (s.det == 0)
        s.K = 1.0L;
    else
        s.K = std::numeric_limits<long double>::infinity();
    return s;
}

Mat2 jacobian_fd(const std::function<Vec2(Vec2)>& map, Vec2 z, double h, bool richardson) {
    auto fd = [&](double step) -> Mat2 {
        Vec2 fxp = map({z.x + step, z.y});
        Vec2 fxm = map({z.x - step, z.y});
        Vec2 fyp = map({z.x, z.y + step});
        Vec2 fym = map({z.x, z.y - step});
        return {(long double)(fxp.x - fxm.x) / (2 * step), (long double)(fyp.x - fym.x) / (2 * step),
                (long double)(fxp.y - fxm.y) / (2 * step), (long double)(fyp.y - fym.y) / (2 * step)};
    };
    Mat2 d1 = fd(h);
    if (!richardson) return d1;
    Mat2 d2 = fd(h / 2);
    return {(4 * d2.a11 - d1.a11) / 3, (4 * d2.a12 - d1.a12) / 3, (4 * d2.a21 - d1.a21) / 3,
            (4 * d2.a22 - d1.a22) / 3};
}

namespace {

long double integrand_value(Quantity q, double exponent, const PatchSample& ps) {
    switch (q) {
        case Quantity::Kf:
        case Quantity::Kfinv: {
            // smax is stable on the dense product; smin is not, so use the
            // factor-accumulated determinant: K = smax^2 / det.
            long double smax = svd2(ps.deriv).smax;
            long double k = ps.det > 0 ? smax * smax / ps.det
                                       : std::numeric_limits<long double>::infinity();
            return powl(std::max(k, 1.0L), (long double)exponent);
        }
        case Quantity::Df:
        case Quantity::Dfinv:
            return powl(svd2(ps.deriv).smax, (long double)exponent);
        case Quantity::Jf:
            return fabsl(ps.det);
    }
    return 0.0L;
}

long double composite_level(const CellMap& cell, Quantity q, double exponent, int level,
                            int order) {
    const auto& nodes = gauss_legendre(order);
    bool inverse = quantity_is_inverse(q);
    int patches = inverse ? cell.inverse_patch_count() : cell.forward_patch_count();
    int panels = 1 << level;
    long double total = 0;
    PatchSample ps;
    for (int patch = 0; patch < patches; ++patch) {
        // panels in the a-direction never straddle the declared split points
        std::vector<double> edges{0.0};
        for (double sp : (inverse ? cell.inverse_splits(patch) : cell.forward_splits(patch)))
            edges.push_back(sp);
        edges.push_back(1.0);
        std::sort(edges.begin(), edges.end());
        long double acc = 0;
        for (size_t seg = 0; seg + 1 < edges.size(); ++seg) {
            double lo = edges[seg], width = edges[seg + 1] - edges[seg];
            if (width <= 0) continue;
            for (int pa = 0; pa < panels; ++pa) {
                for (int pb = 0; pb < panels; ++pb) {
                    for (const auto& [na, wa] : nodes) {
                        double a = lo + width * (pa + na) / panels;
                        for (const auto& [nb, wb] : nodes) {
                            double b = (pb + nb) / panels;
                            if (inverse)
                                cell.inverse_sample(patch, a, b, ps);
                            else
                                cell.forward_sample(patch, a, b, ps);
                            acc += (long double)(wa * wb * width) *
                                   integrand_value(q, exponent, ps) * ps.weight;
                        }
                    }
                }
            }
        }
        total += acc / (long double)(panels) / (long double)(panels);
    }
    return total;
}

}  // namespace

CellIntegral integrate_cell(const CellMap& cell, Quantity q, double exponent,
                            const QuadratureParams& params) {
    CellIntegral out;
    long double prev = composite_level(cell, q, exponent, params.start_level, params.order);
    for (int level = params.start_level + 1; level <= params.max_level; ++level) {
        long double cur = composite_level(cell, q, exponent, level, params.order);
        long double denom = fabsl(cur) > 0 ? fabsl(cur) : 1.0L;
        if (fabsl(cur - prev) / denom < (long double)params.rel_tol) {
            out.value = cur;
            out.converged = true;
            out.level = level;
            return out;
        }
        prev = cur;
    }
    out.value = prev;
    out.converged = false;
    out.level = params.max_level;
    return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = (int)std::thread::hardware_concurrency();
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys, double* intercept) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_slope needs at least two points");
    double n = (double)xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (intercept) *intercept = (sy - slope * sx) / n;
    return slope;
}

SeriesReport dyadic_series(const CellFamily& family, Quantity q, double exponent, int jmin,
                           int jmax, const QuadratureParams& params, double margin, int threads) {
    if (jmax < jmin) throw std::invalid_argument("empty dyadic range");
    SeriesReport rep;
    rep.quantity = q;
    rep.exponent = exponent;
    rep.jmin = jmin;
    rep.jmax = jmax;
    int n = jmax - jmin + 1;
    rep.integrals.assign(n, 0.0L);
    std::vector<char> conv(n, 0);
    parallel_for(n, threads, [&](int i) {
        CellMap cm = family.cell_index(jmin + i);
        CellIntegral ci = integrate_cell(cm, q, exponent, params);
        rep.integrals[i] = ci.value;
        conv[i] = ci.converged ? 1 : 0;
    });
    for (int i = 0; i < n; ++i)
        if (!conv[i]) rep.any_unconverged = true;
    std::vector<double> xs(n), ys(n);
    bool bad = rep.any_unconverged;
    for (int i = 0; i < n; ++i) {
        xs[i] = jmin + i;
        if (!(rep.integrals[i] > 0)) bad = true;
        ys[i] = (double)log2l(rep.integrals[i]);
        if (!std::isfinite(ys[i])) bad = true;
    }
    for (int i = 0; i + 1 < n; ++i)
        rep.log2_ratios.push_back((double)(log2l(rep.integrals[i + 1]) - log2l(rep.integrals[i])));
    if (bad) {
        rep.verdict = "inconclusive";
        rep.slope = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    rep.slope = fit_slope(xs, ys, &rep.intercept);
    if (rep.slope < -margin)
        rep.verdict = "converges";
    else if (rep.slope > margin)
        rep.verdict = "diverges";
    else
        rep.verdict = "critical";
    return rep;
}

ScanResult critical_exponent_scan(const CellFamily& family, Quantity q, double lo, double hi,
                                  int jmin, int jmax, const QuadratureParams& params,
                                  double slope_tol, int threads) {
    ScanResult res;
    auto slope_at = [&](double e) {
        return dyadic_series(family, q, e, jmin, jmax, params, 0.1, threads).slope;
    };
    double slo = slope_at(lo);
    double shi = slope_at(hi);
    if (!(slo < 0 && shi > 0)) {
        if (slo > 0 && shi < 0) {
            std::swap(lo, hi);
            std::swap(slo, shi);
        } else {
            res.ok = false;
            return res;
        }
    }
    double mid = 0.5 * (lo + hi), smid = 0;
    for (int it = 0; it < 40; ++it) {
        mid = 0.5 * (lo + hi);
        smid = slope_at(mid);
        ++res.iterations;
        if (std::fabs(smid) <= slope_tol) break;
        if (smid < 0) {
            lo = mid;
            slo = smid;
        } else {
            hi = mid;
            shi = smid;
        }
        if (std::fabs(hi - lo) < 1e-4) break;
    }
    res.exponent = mid;
    res.slope = smid;
    double dslope = (shi - slo) / std::max(hi - lo, 1e-12);
    res.uncertainty = dslope > 0 ? 0.1 / dslope : 0.0;
    res.ok = true;
    return res;
}

ThresholdSet thresholds(Rational s, std::optional<Rational> p) {
    if (!(Rational(1) < s)) throw std::domain_error("cusp degree must exceed 1");
    ThresholdSet t;
    Rational sm1 = s - Rational(1);
    t.q_distortion = rational_max(Rational(1), Rational(1) / sm1);
    t.p_inverse_gradient = Rational(2) * (s + Rational(1)) / (Rational(2) * s - Rational(1));
    t.q_inverse_distortion = (s + Rational(1)) / sm1;
    if (p) {
        if (!(Rational(1) < *p)) throw std::domain_error("combined threshold needs p > 1");
        Rational denom = (Rational(2) * s - Rational(1)) * (*p) + Rational(4) - Rational(2) * s;
        t.q_combined = rational_max(Rational(1) / sm1, Rational(3) * (*p) / denom);
    }
    return t;
}

Rational sobolev_transfer_exponent(Rational p, Rational q) {
    return ((q + Rational(1)) * p - Rational(2) * q) / (p - q);
}

}  // namespace cuspext
