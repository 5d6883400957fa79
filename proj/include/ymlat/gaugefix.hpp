#pragma once

// Axial gauge at a medium scale and the binary Landau refinement.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ymlat/errors.hpp"
#include "ymlat/field.hpp"

namespace ymlat {

struct AxialDiagnostics {
    double max_bond_norm = 0.0;
    double lipschitz_n = 0.0;      // max_{n,m} |log(gamma_n(m/L)^{-1} gamma_{n+1}(m/L))|
    double lipschitz_t = 0.0;      // L * max_{n,m} |log u^n_m|
    double pole_clearance = 0.0;   // distance from the loop U_0 .. U_{L-1} U_0 to the pole
    bool default_pole = true;      // pole at -1, i.e. plain geodesic contraction
    double axis_deviation = 0.0;   // max_n d(U^g(y_n, y_{n+1}), exp(log V / L))
    double scaled_bound = 0.0;     // max bond norm * 2^{N alpha / 2}
};

template <LieGroup G>
struct AxialResult {
    GaugeTransform<G> g;
    OneForm<G> A;
    AxialDiagnostics diagnostics;
};

struct ScaleDiagnostics {
    int scale = 0;
    double max_bond_norm = 0.0;
    double max_E = 0.0;
    double max_delta = 0.0;
    double contract_residual = 0.0;
};

template <LieGroup G>
struct LandauResult {
    GaugeTransform<G> g;
    OneForm<G> A;
    std::vector<ScaleDiagnostics> scales; // N_0 .. N_1
    std::vector<std::string> warnings;
    std::optional<AxialDiagnostics> axial;
};

template <LieGroup G>
struct PartialGauge {
    OneForm<G> A;
    GaugeTransform<G> g;
};

namespace detail {

// Deterministic candidate poles: -1 followed by fixed Haar draws far from 1.
inline std::vector<SU2::Element> pole_candidates() {
    std::vector<SU2::Element> out{{-1.0, 0.0, 0.0, 0.0}};
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    while (out.size() < 257) {
        const auto p = SU2::haar(rng);
        if (SU2::class_angle(p) >= std::numbers::pi / 2) out.push_back(p);
    }
    return out;
}

} // namespace detail

// Axial gauge at the scale of U. Only defined for simply connected G.
template <LieGroup G>
AxialResult<G> axial_gauge(const GaugeField<G>& U, double alpha) {
    if constexpr (!G::simply_connected) {
        throw SimplyConnectedRequired("axial gauge requires a simply connected group");
    } else {
        using E = typename G::Element;
        const int N = U.scale();
        if (N < 1) throw std::invalid_argument("axial_gauge: scale must be >= 1");
        const int L = U.size();
        const auto mul = [](const E& a, const E& b) { return G::multiply(a, b); };

        // spread the column holonomy uniformly along x_1 = 0
        E V = G::identity();
        for (int n = 0; n < L; ++n) V = mul(V, U.link(Dir::e2, 0, n));
        const auto lv = G::log_checked(V);
        const E W = G::exp(lv.value * (1.0 / L));
        const E Winv = G::inverse(W);
        std::vector<E> gbar(static_cast<std::size_t>(L));
        gbar[0] = G::identity();
        for (int n = 0; n + 1 < L; ++n) gbar[n + 1] = mul(mul(Winv, gbar[n]), U.link(Dir::e2, 0, n));

        // horizontal loops of U^gbar from y_n
        std::vector<E> loops(static_cast<std::size_t>(L));
        for (int n = 0; n < L; ++n) {
            E h = gbar[n];
            for (int m = 0; m < L; ++m) h = mul(h, U.link(Dir::e1, m, n));
            loops[n] = mul(h, G::inverse(gbar[n]));
        }

        // pole choice: the contraction exp(t log(U_n w)) exp(t log w^{-1}) is
        // continuous in n as long as the loop avoids P = -w^{-1}
        std::vector<E> loop_points;
        for (int n = 0; n < L; ++n) {
            const E& a = loops[n];
            const E& b = loops[(n + 1) % L];
            loop_points.push_back(a);
            const auto step = G::log(mul(G::inverse(a), b));
            for (int s = 1; s < 4; ++s) loop_points.push_back(mul(a, G::exp(step * (s / 4.0))));
        }
        const auto clearance = [&](const E& P) {
            double c = INFINITY;
            for (const auto& x : loop_points) c = std::min(c, distance<G>(x, P));
            return c;
        };
        const auto candidates = detail::pole_candidates();
        E pole = candidates[0];
        double best = clearance(pole);
        bool default_pole = true;
        if (best < 0.25) {
            for (std::size_t k = 1; k < candidates.size(); ++k) {
                const double c = clearance(candidates[k]);
                if (c > best) {
                    best = c;
                    pole = candidates[k];
                    default_pole = false;
                }
            }
        }
        if (best < 1e-3) throw HomotopyFailure("axial gauge: no pole clears the loop of row holonomies");
        const E w = G::inverse(mul(E{-1.0, 0.0, 0.0, 0.0}, pole)); // w = -P^{-1}
        const auto lw_inv = G::log(G::inverse(w));

        std::vector<typename G::Algebra> shifted(static_cast<std::size_t>(L));
        for (int n = 0; n < L; ++n) {
            const auto r = G::log_checked(mul(loops[n], w));
            if (r.near_cut_locus) throw HomotopyFailure("axial gauge: row holonomy at the chosen pole");
            shifted[n] = r.value;
        }
        const auto gamma = [&](int n, int m) {
            const double t = static_cast<double>(m) / L;
            return mul(G::exp(shifted[n % L] * t), G::exp(lw_inv * t));
        };

        AxialResult<G> out{GaugeTransform<G>(N), OneForm<G>(N), {}};
        auto& g = out.g;
        AxialDiagnostics& d = out.diagnostics;
        d.pole_clearance = best;
        d.default_pole = default_pole;
        for (int n = 0; n < L; ++n) {
            g.at(0, n) = gbar[n];
            for (int m = 0; m + 1 < L; ++m) {
                const E u = mul(G::inverse(gamma(n, m)), gamma(n, m + 1));
                d.lipschitz_t = std::max(d.lipschitz_t, L * norm(G::log(u)));
                g.at(m + 1, n) = mul(mul(G::inverse(u), g.at(m, n)), U.link(Dir::e1, m, n));
            }
            const E last = mul(G::inverse(gamma(n, L - 1)), gamma(n, L));
            d.lipschitz_t = std::max(d.lipschitz_t, L * norm(G::log(last)));
            for (int m = 0; m <= L; ++m)
                d.lipschitz_n = std::max(d.lipschitz_n, distance<G>(gamma(n, m), gamma(n + 1, m)));
        }
        const auto Ug = apply_gauge(U, g);
        out.A = log_field(Ug);
        for (int n = 0; n < L; ++n) d.axis_deviation = std::max(d.axis_deviation, distance<G>(Ug.link(Dir::e2, 0, n), W));
        d.max_bond_norm = max_bond_norm(out.A);
        d.scaled_bound = d.max_bond_norm * std::pow(2.0, N * alpha / 2.0);
        return out;
    }
}

// Midpoint halving: coarse values at N-1 are split equally and g is solved
// on the new midpoints.
template <LieGroup G>
PartialGauge<G> landau_refine_level1(const GaugeField<G>& U, const OneForm<G>& A_coarse,
                                     const GaugeTransform<G>& g_coarse) {
    const int N = U.scale();
    if (A_coarse.scale() != N - 1 || g_coarse.scale() != N - 1)
        throw std::invalid_argument("landau_refine_level1: coarse data must be one scale below U");
    const int Lc = A_coarse.size();
    PartialGauge<G> out{OneForm<G>(N), GaugeTransform<G>(N)};
    for (int J = 0; J < Lc; ++J)
        for (int I = 0; I < Lc; ++I) out.g.at(2 * I, 2 * J) = g_coarse.at(I, J);
    for (int J = 0; J < Lc; ++J) {
        for (int I = 0; I < Lc; ++I) {
            for (Dir mu : {Dir::e1, Dir::e2}) {
                const auto h = A_coarse.value(mu, I, J) * 0.5;
                const int di = mu == Dir::e1 ? 1 : 0, dj = 1 - di;
                const int xi = 2 * I + di, xj = 2 * J + dj;
                out.A.value(mu, 2 * I, 2 * J) = h;
                out.A.value(mu, xi, xj) = h;
                out.g.at(xi, xj) =
                    G::multiply(G::multiply(G::exp(h), out.g.at(xi + di, xj + dj)), G::inverse(U.link(mu, xi, xj)));
            }
        }
    }
    return out;
}

// Fills the bonds around vertices with two odd coordinates. Returns the
// largest measured |E_i| and delta.
template <LieGroup G>
std::pair<double, double> landau_refine_level2(const GaugeField<G>& U, PartialGauge<G>& p) {
    using E = typename G::Element;
    using Alg = typename G::Algebra;
    const int N = U.scale();
    const int Lc = U.size() / 2;
    auto& A = p.A;
    auto& g = p.g;
    const auto mul = [](const E& a, const E& b) { return G::multiply(a, b); };
    const auto checked_log = [&](const E& x, const char* what, int i, int j) {
        const auto r = G::log_checked(x);
        if (r.near_cut_locus)
            throw GaugeTooRough(std::string("landau level 2: ") + what + " near the cut locus at scale " +
                                std::to_string(N) + ", vertex (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        return r.value;
    };
    double max_E = 0.0, max_delta = 0.0;
    for (int J = 0; J < Lc; ++J) {
        for (int I = 0; I < Lc; ++I) {
            const int xi = 2 * I + 1, xj = 2 * J + 1;
            // p1..p4 anti-clockwise from the positive quadrant; z_i their origins
            const int bases[4][2] = {{xi, xj}, {xi - 1, xj}, {xi - 1, xj - 1}, {xi, xj - 1}};
            Alg F[4];
            for (int k = 0; k < 4; ++k) {
                const auto r = make_plaquette(LatticeCoord::make(N, bases[k][0], bases[k][1]));
                const auto z = origin(r);
                const E& gz = g(z);
                F[k] = checked_log(mul(mul(gz, holonomy(U, r)), G::inverse(gz)), "plaquette", bases[k][0], bases[k][1]);
            }
            const Alg b1p = A.value(Dir::e1, xi, xj + 1), b1m = A.value(Dir::e1, xi, xj - 1);
            const Alg b2p = A.value(Dir::e2, xi + 1, xj), b2m = A.value(Dir::e2, xi - 1, xj);
            const Alg a1 = (b1p + b1m) * 0.5 + (F[0] - F[3]) * 0.375 + (F[1] - F[2]) * 0.125;
            A.value(Dir::e1, xi, xj) = a1;
            g.at(xi, xj) = mul(mul(G::exp(a1), g.at(xi + 1, xj)), G::inverse(U.link(Dir::e1, xi, xj)));

            const auto gauged = [&](Dir mu, int i, int j) {
                const int di = mu == Dir::e1 ? 1 : 0;
                return mul(mul(g.at(i, j), U.link(mu, i, j)), G::inverse(g.at(i + di, j + 1 - di)));
            };
            const Alg a2 = checked_log(gauged(Dir::e2, xi, xj), "bond", xi, xj);
            const Alg c1 = checked_log(gauged(Dir::e1, xi - 1, xj), "bond", xi - 1, xj);
            const Alg c2 = checked_log(gauged(Dir::e2, xi, xj - 1), "bond", xi, xj - 1);
            A.value(Dir::e2, xi, xj) = a2;
            A.value(Dir::e1, xi - 1, xj) = c1;
            A.value(Dir::e2, xi, xj - 1) = c2;

            const Alg f2 = (b2p + b2m) * 0.5 + (F[1] - F[0]) * 0.375 + (F[2] - F[3]) * 0.125;
            const Alg f3 = (b1p + b1m) * 0.5 + (F[1] - F[2]) * 0.375 + (F[0] - F[3]) * 0.125;
            const Alg f4 = (b2p + b2m) * 0.5 + (F[2] - F[3]) * 0.375 + (F[1] - F[0]) * 0.125;
            max_E = std::max({max_E, norm(a2 - f2), norm(c1 - f3), norm(c2 - f4)});
            double delta = norm(b1p) + norm(b1m) + norm(b2p) + norm(b2m);
            for (const auto& f : F) delta += norm(f);
            max_delta = std::max(max_delta, delta);
        }
    }
    return {max_E, max_delta};
}

// Binary Landau gauge from N_0 to the scale of U, starting from A = log U
// and g = 1 at N_0.
template <LieGroup G>
LandauResult<G> landau_gauge(const GaugeField<G>& U, int N0, double initial_bound_threshold = 0.5) {
    const int N1 = U.scale();
    if (N0 < 0 || N0 > N1) throw std::invalid_argument("landau_gauge: need 0 <= N_0 <= N_1");
    const auto U0 = coarsen(U, N0);
    LandauResult<G> out{GaugeTransform<G>(N0), log_field(U0), {}, {}, std::nullopt};
    const double a0 = max_bond_norm(out.A);
    out.scales.push_back({N0, a0, 0.0, 0.0, contract_residual(out.A, U0, out.g)});
    if (a0 > initial_bound_threshold)
        out.warnings.push_back("initial bound: max |A^{N_0}| = " + std::to_string(a0) + " exceeds threshold " +
                               std::to_string(initial_bound_threshold));
    for (int N = N0 + 1; N <= N1; ++N) {
        const GaugeField<G> UN = N == N1 ? U : coarsen(U, N);
        auto part = landau_refine_level1(UN, out.A, out.g);
        const auto [max_E, max_delta] = landau_refine_level2(UN, part);
        out.A = std::move(part.A);
        out.g = std::move(part.g);
        out.scales.push_back({N, max_bond_norm(out.A), max_E, max_delta, contract_residual(out.A, UN, out.g)});
    }
    return out;
}

// Extends g from the coarse lattice to the scale `fine` by the value at
// the nearest coarse vertex (ties to the south-west).
template <LieGroup G>
GaugeTransform<G> lift_gauge(const GaugeTransform<G>& g, int fine) {
    const int R = 1 << (fine - g.scale());
    GaugeTransform<G> out(fine);
    const int L = out.size();
    const auto nearest = [&](int i) { return (i + (R - 1) / 2) / R; };
    for (int j = 0; j < L; ++j)
        for (int i = 0; i < L; ++i) out.at(i, j) = g.at(nearest(i), nearest(j));
    return out;
}

// Axial gauge at N_0 followed by the Landau refinement up to the scale of U.
template <LieGroup G>
LandauResult<G> full_gauge(const GaugeField<G>& U, int N0, double alpha, double initial_bound_threshold = 0.5) {
    if (N0 < 1 || N0 > U.scale()) throw std::invalid_argument("full_gauge: need 1 <= N_0 <= N_1");
    const auto ax = axial_gauge(coarsen(U, N0), alpha);
    const auto lift = lift_gauge(ax.g, U.scale());
    auto res = landau_gauge(apply_gauge(U, lift), N0, initial_bound_threshold);
    res.g = compose(res.g, lift);
    res.scales.back().contract_residual = contract_residual(res.A, U, res.g);
    res.axial = ax.diagnostics;
    return res;
}

} // namespace ymlat
