#pragma once

// Discrete growth and Hoelder-type norms of one-forms, and q-variation.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ymlat/field.hpp"

namespace ymlat {

struct SegmentPair {
    AxisSegment first;
    AxisSegment second;
};

struct NormReport {
    double alpha = 0.0;
    int scale = 0;
    double gr_norm = 0.0;
    double rho_norm = 0.0;
    AxisSegment gr_witness{};
    SegmentPair rho_witness{};
    double wall_time = 0.0; // seconds

    double total() const { return gr_norm + rho_norm; }
};

struct VariationResult {
    double q = 1.0;
    double value = 0.0;
    std::vector<int> indices; // optimal subsequence
};

// |l|^alpha for a segment of k bonds at scale N.
inline double gr_denominator(int k, int scale, double alpha) { return std::pow(std::ldexp(k, -scale), alpha); }

// rho^alpha with rho = (|l| d)^{1/2}, d the torus distance of the offsets.
inline double rho_denominator(int k, int dist, int scale, double alpha) {
    return std::pow(std::sqrt(std::ldexp(k, -scale) * std::ldexp(dist, -scale)), alpha);
}

inline int torus_distance(int a, int b, int scale) {
    const int L = lattice_size(scale);
    const int d = wrap_coord(a - b, scale);
    return std::min(d, L - d);
}

// Exact Hausdorff distance on the unit torus between two axis segments
// (closed point sets).
double hausdorff_distance(const AxisSegment& a, const AxisSegment& b);

// sup over all segments of |A(l)| / |l|^alpha. Running sums along each
// row make the values bit-identical to summing every segment directly.
template <LieGroup G>
NormReport gr_norm(const OneForm<G>& A, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("gr_norm: alpha must lie in [0, 1]");
    const auto t0 = std::chrono::steady_clock::now();
    const int N = A.scale(), L = A.size();
    std::vector<double> den(static_cast<std::size_t>(L) + 1);
    for (int k = 1; k <= L; ++k) den[k] = gr_denominator(k, N, alpha);
    NormReport r;
    r.alpha = alpha;
    r.scale = N;
    bool have = false;
    for (Dir d : {Dir::e1, Dir::e2}) {
        for (int o = 0; o < L; ++o) {
            const auto* row = A.row(d, o);
            for (int s = 0; s < L; ++s) {
                typename G::Algebra sum{};
                const int top = s == 0 ? L : L - 1;
                for (int k = 1; k <= top; ++k) {
                    sum += row[(s + k - 1) & (L - 1)];
                    const double v = norm(sum) / den[k];
                    if (!have || v > r.gr_norm) {
                        r.gr_norm = v;
                        r.gr_witness = {d, N, o, s, k};
                        have = true;
                    }
                }
            }
        }
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// sup over distinct parallel pairs (same direction, same projection,
// different offsets) of |A(l) - A(l')| / rho(l, l')^alpha.
template <LieGroup G>
NormReport rho_norm(const OneForm<G>& A, double alpha, int workers = 1) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("rho_norm: alpha must lie in [0, 1]");
    using Alg = typename G::Algebra;
    const auto t0 = std::chrono::steady_clock::now();
    const int N = A.scale(), L = A.size();
    std::vector<double> den(static_cast<std::size_t>(L + 1) * static_cast<std::size_t>(L / 2 + 1), 1.0);
    for (int k = 1; k <= L; ++k)
        for (int dd = 1; dd <= L / 2; ++dd) den[k * (L / 2 + 1) + dd] = rho_denominator(k, dd, N, alpha);

    struct Best {
        double value = 0.0;
        SegmentPair witness{};
        bool have = false;
    };
    // one block per (direction, start); blocks are reduced in order
    const int blocks = 2 * L;
    std::vector<Best> best(static_cast<std::size_t>(blocks));
    auto run_block = [&](int b) {
        const Dir d = b < L ? Dir::e1 : Dir::e2;
        const int s = b % L;
        std::vector<Alg> sums(static_cast<std::size_t>(L), Alg{});
        Best& out = best[static_cast<std::size_t>(b)];
        const int top = s == 0 ? L : L - 1;
        for (int k = 1; k <= top; ++k) {
            for (int o = 0; o < L; ++o) sums[o] += A.row(d, o)[(s + k - 1) & (L - 1)];
            for (int o1 = 0; o1 < L; ++o1) {
                for (int o2 = o1 + 1; o2 < L; ++o2) {
                    const int dd = torus_distance(o1, o2, N);
                    const double v = norm(sums[o1] - sums[o2]) / den[k * (L / 2 + 1) + dd];
                    if (!out.have || v > out.value) {
                        out.value = v;
                        out.witness = {{d, N, o1, s, k}, {d, N, o2, s, k}};
                        out.have = true;
                    }
                }
            }
        }
    };
    if (L < 2) {
        // a single offset has no parallel partner
    } else if (workers <= 1) {
        for (int b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < std::min(workers, blocks); ++w)
            pool.emplace_back([&] {
                for (int b = next++; b < blocks; b = next++) run_block(b);
            });
        pool.clear();
    }
    NormReport r;
    r.alpha = alpha;
    r.scale = N;
    bool have = false;
    for (const auto& b : best) {
        if (!b.have) continue;
        if (!have || b.value > r.rho_norm) {
            r.rho_norm = b.value;
            r.rho_witness = b.witness;
            have = true;
        }
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// Both norms; |A|_alpha = gr + rho.
template <LieGroup G>
NormReport compute_norms(const OneForm<G>& A, double alpha, int workers = 1) {
    auto r = gr_norm(A, alpha);
    const auto p = rho_norm(A, alpha, workers);
    r.rho_norm = p.rho_norm;
    r.rho_witness = p.rho_witness;
    r.wall_time += p.wall_time;
    return r;
}

// Exact q-variation of a finite sequence by dynamic programming over the
// last kept index; among optimal subsequences the shortest is returned.
template <class P, class Dist>
VariationResult q_variation(std::span<const P> xs, double q, Dist dist) {
    if (q < 1.0) throw std::invalid_argument("q_variation: q must be >= 1");
    VariationResult r;
    r.q = q;
    const int n = static_cast<int>(xs.size());
    if (n == 0) return r;
    std::vector<double> V(static_cast<std::size_t>(n), 0.0);
    std::vector<int> len(static_cast<std::size_t>(n), 1), prev(static_cast<std::size_t>(n), -1);
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double cand = V[i] + std::pow(dist(xs[i], xs[j]), q);
            const int cl = len[i] + 1;
            if (cand > V[j] || (cand == V[j] && prev[j] >= 0 && cl < len[j])) {
                V[j] = cand;
                len[j] = cl;
                prev[j] = i;
            }
        }
    }
    int end = 0;
    for (int j = 1; j < n; ++j)
        if (V[j] > V[end] || (V[j] == V[end] && len[j] < len[end])) end = j;
    r.value = std::pow(V[end], 1.0 / q);
    for (int j = end; j >= 0; j = prev[j]) r.indices.push_back(j);
    std::reverse(r.indices.begin(), r.indices.end());
    return r;
}

template <LieGroup G>
VariationResult q_variation(const AntiDevelopment<G>& X, double q) {
    return q_variation<typename G::Algebra>(std::span<const typename G::Algebra>(X.points), q,
                                            [](const auto& a, const auto& b) { return norm(a - b); });
}

// (sum over consecutive kept points of d^q)^{1/q} for a given subsequence.
template <class P, class Dist>
double variation_of(std::span<const P> xs, const std::vector<int>& idx, double q, Dist dist) {
    double s = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) s += std::pow(dist(xs[idx[k - 1]], xs[idx[k]]), q);
    return std::pow(s, 1.0 / q);
}

// Averages the direction-mu bonds over dyadic cells of scale coarse_scale;
// other bonds are unchanged.
template <LieGroup G>
OneForm<G> dyadic_approximant(const OneForm<G>& A, int coarse_scale, Dir mu) {
    const int N = A.scale();
    if (coarse_scale < 0 || coarse_scale > N) throw std::invalid_argument("dyadic_approximant: need 0 <= coarse <= N");
    const int R = 1 << (N - coarse_scale);
    const int L = A.size();
    OneForm<G> out = A;
    for (int o = 0; o < L; ++o) {
        for (int c = 0; c < L; c += R) {
            typename G::Algebra sum{};
            for (int u = 0; u < R; ++u) sum += A.value(mu == Dir::e1 ? Dir::e1 : Dir::e2, mu == Dir::e1 ? c + u : o,
                                                       mu == Dir::e1 ? o : c + u);
            const auto avg = sum * (1.0 / R);
            for (int u = 0; u < R; ++u) {
                if (mu == Dir::e1) out.value(Dir::e1, c + u, o) = avg;
                else out.value(Dir::e2, o, c + u) = avg;
            }
        }
    }
    return out;
}

// Right-hand side of the Hoelder-in-Hausdorff-distance bound.
inline double hoelder_dH_bound(double gr, double rho, double alpha, double len_min, double dH) {
    return std::pow(2.0, 1.0 - alpha / 2.0) * rho * std::pow(len_min, alpha / 2.0) * std::pow(dH, alpha / 2.0) +
           std::pow(2.0, 1.0 + alpha) * gr * std::pow(dH, alpha);
}

// Largest ratio |A(l) - A(l')| / bound over random segment pairs (0 when
// the numerator vanishes).
template <LieGroup G, class Rng>
double hoelder_dH_check(const OneForm<G>& A, double alpha, const NormReport& norms, int samples, Rng& rng,
                        bool parallel_only = false) {
    const auto segs = all_segments(A.scale());
    const SegmentIntegrator<G> S(A);
    std::uniform_int_distribution<std::size_t> pick(0, segs.size() - 1);
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
        const auto& a = segs[pick(rng)];
        AxisSegment b = segs[pick(rng)];
        if (parallel_only) {
            b.dir = a.dir;
            b.start = a.start;
            b.length = a.length;
        }
        const double num = norm(S(a) - S(b));
        if (num == 0.0) continue;
        const double dH = hausdorff_distance(a, b);
        const double bound = hoelder_dH_bound(norms.gr_norm, norms.rho_norm, alpha, std::min(a.measure(), b.measure()), dH);
        worst = std::max(worst, bound > 0.0 ? num / bound : INFINITY);
    }
    return worst;
}

} // namespace ymlat
