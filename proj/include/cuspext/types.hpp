#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cuspext {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// 2x2 derivative matrix. Entries are long double: the squeezed charts carry
// factors of 1/delta that overflow double well before they overflow the
// 80-bit extended format.
struct Mat2 {
    long double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    long double det() const { return a11 * a22 - a12 * a21; }
    Mat2 inverse() const {
        long double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

inline Mat2 operator*(const Mat2& A, const Mat2& B) {
    return {A.a11 * B.a11 + A.a12 * B.a21, A.a11 * B.a12 + A.a12 * B.a22,
            A.a21 * B.a11 + A.a22 * B.a21, A.a21 * B.a12 + A.a22 * B.a22};
}

inline Mat2 identity_mat2() { return {1, 0, 0, 1}; }

struct Svd2 {
    long double smax = 0;
    long double smin = 0;
};

// Closed-form singular values of a 2x2 matrix (stable E/F/G/H form).
inline Svd2 svd2(const Mat2& m) {
    long double e = (m.a11 + m.a22) / 2;
    long double f = (m.a11 - m.a22) / 2;
    long double g = (m.a21 + m.a12) / 2;
    long double h = (m.a21 - m.a12) / 2;
    long double q = std::sqrt(e * e + h * h);
    long double r = std::sqrt(f * f + g * g);
    return {q + r, std::fabs(q - r)};
}

inline long double opnorm(const Mat2& m) { return svd2(m).smax; }

// Distortion quotient: smax/smin when det > 0, 1 on det == 0, +inf otherwise
// (orientation-reversed evaluation never happens on the maps here; the guard
// keeps bad inputs loud instead of silently wrong).
inline long double distortion(const Mat2& m) {
    long double d = m.det();
    if (d == 0) return 1.0L;
    if (d < 0) return std::numeric_limits<long double>::infinity();
    Svd2 s = svd2(m);
    if (s.smin == 0) return std::numeric_limits<long double>::infinity();
    return s.smax / s.smin;
}

// Exact rational arithmetic for the closed-form threshold expressions.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        normalize();
    }
    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    double value() const { return double(num) / double(den); }
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
inline Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
inline Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
inline Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::invalid_argument("rational division by zero");
    return {a.num * b.den, a.den * b.num};
}
inline bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(Rational a, Rational b) { return !(a == b); }
inline bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
inline Rational rational_max(Rational a, Rational b) { return a < b ? b : a; }

Rational parse_rational(const std::string& text);

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace cuspext
