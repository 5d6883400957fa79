#pragma once

// Compact groups U(1) and SU(2) with their Lie algebras.
//
// The su(2) norm is the one for which exp(X) = cos|X| + sin|X| X/|X| in
// quaternion form, so |log x| is the rotation half-angle and d(1, -1) = pi.

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "ymlat/errors.hpp"

namespace ymlat {

inline constexpr double cut_locus_tolerance = 1e-8;

template <int Dim>
struct AlgebraVector {
    std::array<double, Dim> c{};

    static constexpr int dim = Dim;

    double& operator[](int k) { return c[k]; }
    double operator[](int k) const { return c[k]; }

    AlgebraVector& operator+=(const AlgebraVector& o) {
        for (int k = 0; k < Dim; ++k) c[k] += o.c[k];
        return *this;
    }
    AlgebraVector& operator-=(const AlgebraVector& o) {
        for (int k = 0; k < Dim; ++k) c[k] -= o.c[k];
        return *this;
    }
    AlgebraVector& operator*=(double s) {
        for (int k = 0; k < Dim; ++k) c[k] *= s;
        return *this;
    }
    friend AlgebraVector operator+(AlgebraVector a, const AlgebraVector& b) { return a += b; }
    friend AlgebraVector operator-(AlgebraVector a, const AlgebraVector& b) { return a -= b; }
    friend AlgebraVector operator*(double s, AlgebraVector a) { return a *= s; }
    friend AlgebraVector operator*(AlgebraVector a, double s) { return a *= s; }
    friend AlgebraVector operator-(AlgebraVector a) { return a *= -1.0; }
    friend bool operator==(const AlgebraVector&, const AlgebraVector&) = default;
};

template <int Dim>
double dot(const AlgebraVector<Dim>& a, const AlgebraVector<Dim>& b) {
    double s = 0.0;
    for (int k = 0; k < Dim; ++k) s += a.c[k] * b.c[k];
    return s;
}

template <int Dim>
double norm(const AlgebraVector<Dim>& a) {
    if constexpr (Dim == 1) {
        return std::fabs(a.c[0]);
    } else {
        return std::sqrt(dot(a, a));
    }
}

template <class Algebra>
struct LogResult {
    Algebra value;
    bool near_cut_locus = false;
};

struct U1 {
    static constexpr std::string_view tag = "u1";
    static constexpr int algebra_dim = 1;
    static constexpr int element_size = 1;
    static constexpr bool simply_connected = false;

    struct Element {
        double theta = 0.0;
        friend bool operator==(const Element&, const Element&) = default;
    };
    using Algebra = AlgebraVector<1>;

    // Angle reduced into (-pi, pi].
    static double wrap(double x) {
        double r = std::remainder(x, 2.0 * std::numbers::pi);
        if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
        return r;
    }

    static Element identity() { return {}; }
    static Element multiply(const Element& x, const Element& y) { return {wrap(x.theta + y.theta)}; }
    static Element inverse(const Element& x) { return {wrap(-x.theta)}; }
    static Element exp(const Algebra& X) { return {wrap(X.c[0])}; }

    static LogResult<Algebra> log_checked(const Element& x) {
        return {Algebra{{x.theta}}, std::fabs(x.theta) > std::numbers::pi - cut_locus_tolerance};
    }
    static Algebra log(const Element& x) { return Algebra{{x.theta}}; }

    static Algebra adjoint(const Element&, const Algebra& X) { return X; }
    static double re_trace(const Element& x) { return std::cos(x.theta); }
    static double class_angle(const Element& x) { return std::fabs(x.theta); }

    template <class Rng>
    static Element haar(Rng& rng) {
        std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
        return {wrap(u(rng))};
    }

    static std::array<double, 1> to_floats(const Element& x) { return {x.theta}; }
    static Element from_floats(std::span<const double> v) { return {v[0]}; }
};

struct SU2 {
    static constexpr std::string_view tag = "su2";
    static constexpr int algebra_dim = 3;
    static constexpr int element_size = 4;
    static constexpr bool simply_connected = true;

    // Unit quaternion a + b i + c j + d k.
    struct Element {
        double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
        friend bool operator==(const Element&, const Element&) = default;
    };
    using Algebra = AlgebraVector<3>;

    static Element normalized(Element q) {
        const double n = std::sqrt(q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d);
        return {q.a / n, q.b / n, q.c / n, q.d / n};
    }

    static Element identity() { return {}; }

    static Element multiply(const Element& x, const Element& y) {
        return normalized({x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
                           x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
                           x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
                           x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a});
    }

    static Element inverse(const Element& x) { return {x.a, -x.b, -x.c, -x.d}; }

    static Element exp(const Algebra& X) {
        const double n = norm(X);
        const double s = n < 1e-8 ? 1.0 - n * n / 6.0 : std::sin(n) / n;
        return normalized({std::cos(n), s * X.c[0], s * X.c[1], s * X.c[2]});
    }

    static LogResult<Algebra> log_checked(const Element& x) {
        const double s = std::sqrt(x.b * x.b + x.c * x.c + x.d * x.d);
        const double theta = std::atan2(s, x.a);
        const bool near = std::numbers::pi - theta < cut_locus_tolerance;
        if (s == 0.0) {
            // antipode: representative with first coordinate >= 0
            if (x.a < 0.0) return {Algebra{{std::numbers::pi, 0.0, 0.0}}, true};
            return {Algebra{}, false};
        }
        const double f = theta / s;
        return {Algebra{{f * x.b, f * x.c, f * x.d}}, near};
    }
    static Algebra log(const Element& x) { return log_checked(x).value; }

    // y X y^{-1}: rotation of the vector part.
    static Algebra adjoint(const Element& y, const Algebra& X) {
        const Element p{0.0, X.c[0], X.c[1], X.c[2]};
        const Element yp{-y.b * p.b - y.c * p.c - y.d * p.d,
                         y.a * p.b + y.c * p.d - y.d * p.c,
                         y.a * p.c - y.b * p.d + y.d * p.b,
                         y.a * p.d + y.b * p.c - y.c * p.b};
        const Element yi = inverse(y);
        return Algebra{{yp.a * yi.b + yp.b * yi.a + yp.c * yi.d - yp.d * yi.c,
                        yp.a * yi.c - yp.b * yi.d + yp.c * yi.a + yp.d * yi.b,
                        yp.a * yi.d + yp.b * yi.c - yp.c * yi.b + yp.d * yi.a}};
    }

    static double re_trace(const Element& x) { return 2.0 * x.a; }
    static double class_angle(const Element& x) {
        return std::atan2(std::sqrt(x.b * x.b + x.c * x.c + x.d * x.d), x.a);
    }

    template <class Rng>
    static Element haar(Rng& rng) {
        std::normal_distribution<double> g;
        for (;;) {
            Element q{g(rng), g(rng), g(rng), g(rng)};
            const double n2 = q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d;
            if (n2 > 1e-12) return normalized(q);
        }
    }

    static std::array<double, 4> to_floats(const Element& x) { return {x.a, x.b, x.c, x.d}; }
    static Element from_floats(std::span<const double> v) { return {v[0], v[1], v[2], v[3]}; }
};

inline U1::Element operator*(const U1::Element& x, const U1::Element& y) { return U1::multiply(x, y); }
inline SU2::Element operator*(const SU2::Element& x, const SU2::Element& y) { return SU2::multiply(x, y); }

template <class G>
concept LieGroup = requires(typename G::Element x, typename G::Algebra X) {
    { G::identity() } -> std::same_as<typename G::Element>;
    { G::multiply(x, x) } -> std::same_as<typename G::Element>;
    { G::inverse(x) } -> std::same_as<typename G::Element>;
    { G::exp(X) } -> std::same_as<typename G::Element>;
    { G::log(x) } -> std::same_as<typename G::Algebra>;
    { G::adjoint(x, X) } -> std::same_as<typename G::Algebra>;
    { G::re_trace(x) } -> std::convertible_to<double>;
    { G::class_angle(x) } -> std::convertible_to<double>;
};

// d(x, y) = |log(x^{-1} y)|
template <LieGroup G>
double distance(const typename G::Element& x, const typename G::Element& y) {
    return norm(G::log(G::multiply(G::inverse(x), y)));
}

template <LieGroup G, class Rng>
typename G::Algebra random_algebra(Rng& rng, double scale) {
    std::normal_distribution<double> g(0.0, scale);
    typename G::Algebra X;
    for (int k = 0; k < G::algebra_dim; ++k) X.c[k] = g(rng);
    return X;
}

// |log(e^{X_1} ... e^{X_n}) - sum X_i|
template <LieGroup G>
double cbh_defect(std::span<const typename G::Algebra> xs) {
    if (xs.empty()) throw std::invalid_argument("cbh_defect: empty input");
    auto prod = G::identity();
    typename G::Algebra sum{};
    for (const auto& X : xs) {
        prod = G::multiply(prod, G::exp(X));
        sum += X;
    }
    const auto lg = G::log_checked(prod);
    if (lg.near_cut_locus) throw CutLocusError("cbh_defect: product near the cut locus");
    return norm(lg.value - sum);
}

} // namespace ymlat
