#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cuspext/cells.hpp"

namespace cuspext {

enum class Quantity { Kf, Kfinv, Df, Dfinv, Jf };

std::string quantity_name(Quantity q);
std::optional<Quantity> parse_quantity(const std::string& name);
bool quantity_is_inverse(Quantity q);

struct QuadratureParams {
    int order = 8;       // Gauss-Legendre points per panel per axis
    int start_level = 1; // 2^level panels per axis
    int max_level = 6;
    double rel_tol = 1e-6;
};

struct CellIntegral {
    long double value = 0;
    bool converged = false;
    int level = 0;
};

// Nodes/weights on [0,1].
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

// Integral of the quantity over one dyadic cell (forward quantities over the
// annular cell, inverse ones over the flat cell), piecewise per chart.
CellIntegral integrate_cell(const CellMap& cell, Quantity q, double exponent,
                            const QuadratureParams& params);

// Pointwise distortion data of a derivative matrix.
struct DistortionSample {
    Vec2 point;
    Mat2 jac;
    long double opnorm = 0;
    long double det = 0;
    long double K = 1;
};

DistortionSample make_distortion_sample(Vec2 point, const Mat2& jac);

// Central-difference derivative (optionally Richardson-extrapolated).
Mat2 jacobian_fd(const std::function<Vec2(Vec2)>& map, Vec2 z, double h, bool richardson = false);

struct CellFamily {
    CuspProfile profile;
    bool squeezed = false;
    SqueezeParams squeeze{};

    CellMap cell(double t) const { return make_cell_map(profile, t, squeezed, squeeze); }
    CellMap cell_index(int j) const { return cell(std::pow(2.0, -j)); }
};

struct SeriesReport {
    Quantity quantity = Quantity::Kf;
    double exponent = 1.0;
    int jmin = 0, jmax = 0;
    std::vector<long double> integrals;
    std::vector<double> log2_ratios;  // log2(I_{j+1}/I_j)
    double slope = 0;                 // least squares of log2 I_j against j
    double intercept = 0;
    std::string verdict;              // converges | diverges | critical | inconclusive
    bool any_unconverged = false;
};

SeriesReport dyadic_series(const CellFamily& family, Quantity q, double exponent, int jmin,
                           int jmax, const QuadratureParams& params, double margin = 0.1,
                           int threads = 0);

struct ScanResult {
    double exponent = 0;
    double slope = 0;
    double uncertainty = 0;
    int iterations = 0;
    bool ok = false;
};

// Bisection on the fitted slope as a function of the integrand exponent.
ScanResult critical_exponent_scan(const CellFamily& family, Quantity q, double lo, double hi,
                                  int jmin, int jmax, const QuadratureParams& params,
                                  double slope_tol = 0.02, int threads = 0);

struct ThresholdSet {
    Rational q_distortion;          // max{1, 1/(s-1)}
    Rational p_inverse_gradient;    // 2(s+1)/(2s-1)
    Rational q_inverse_distortion;  // (s+1)/(s-1)
    std::optional<Rational> q_combined;  // max{1/(s-1), 3p/((2s-1)p+4-2s)}
};

ThresholdSet thresholds(Rational s, std::optional<Rational> p = std::nullopt);
Rational sobolev_transfer_exponent(Rational p, Rational q);  // ((q+1)p-2q)/(p-q)

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                 double* intercept = nullptr);

// Deterministic helper: run fn(0..n-1) on a pool, results must be written to
// index-addressed storage by the callers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace cuspext
