#pragma once

// Markov chains for the plaquette measures with Wilson and Villain weights.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ymlat/field.hpp"
#include "ymlat/stats.hpp"

namespace ymlat {

using Rng = std::mt19937_64;

enum class ActionKind { wilson, villain };

ActionKind parse_action(std::string_view s);
std::string_view to_string(ActionKind k);

struct ActionSpec {
    ActionKind kind = ActionKind::villain;
    int scale = 0;
    int truncation = 4096; // maximal number of character-sum terms

    double epsilon() const { return std::ldexp(1.0, -scale); }
    double t() const { return std::ldexp(1.0, -2 * scale); }
    double beta() const { return std::ldexp(1.0, 2 * scale); }
};

// Independent stream for (seed, stream id); adding streams never changes
// existing ones.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// ---- scalar weights --------------------------------------------------------

// sum_n exp(-(theta + 2 pi n)^2 / (2t))
double villain_u1_sum(double theta, double t);
double villain_u1_log_sum(double theta, double t);

// sum_l (l+1) exp(-t l(l+2)/2) chi_l(theta), chi_l = sin((l+1)theta)/sin(theta),
// stopped once (l+1)^2 exp(-t l(l+2)/2) < 1e-14 or after `truncation` terms.
// Throws NonPositiveDensity if the truncated sum is not positive.
double villain_su2_character_sum(double theta, double t, int truncation);

// Log of the same heat kernel (density against normalised Haar measure),
// evaluated through the image sum over geodesics; accurate for all t.
double villain_su2_log_kernel(double theta, double t);

// Best-Fisher rejection sampler for the von Mises law with mean 0.
double sample_von_mises(double kappa, Rng& rng);

template <LieGroup G>
typename G::Element element_with_angle(double theta) {
    if constexpr (std::is_same_v<G, U1>) {
        return {U1::wrap(theta)};
    } else {
        return {std::cos(theta), std::sin(theta), 0.0, 0.0};
    }
}

// Plaquette weight Q_N(x). Unnormalised for Wilson; Villain U(1) is the
// wrapped Gaussian sum, Villain SU(2) the truncated character sum.
template <LieGroup G>
double density(const ActionSpec& spec, const typename G::Element& x) {
    if constexpr (std::is_same_v<G, U1>) {
        if (spec.kind == ActionKind::villain) return villain_u1_sum(x.theta, spec.t());
        return std::exp(spec.beta() * (std::cos(x.theta) - 1.0));
    } else {
        if (spec.kind == ActionKind::villain && spec.truncation < 1)
            throw std::invalid_argument("density: truncation must be >= 1");
        if (spec.kind == ActionKind::villain) return villain_su2_character_sum(G::class_angle(x), spec.t(), spec.truncation);
        return std::exp(spec.beta() * (G::re_trace(x) - 2.0));
    }
}

// log Q_N(x) up to an additive constant; used by the Metropolis step.
template <LieGroup G>
double log_density(const ActionSpec& spec, const typename G::Element& x) {
    if constexpr (std::is_same_v<G, U1>) {
        if (spec.kind == ActionKind::villain) return villain_u1_log_sum(x.theta, spec.t());
        return spec.beta() * (std::cos(x.theta) - 1.0);
    } else {
        if (spec.kind == ActionKind::villain) return villain_su2_log_kernel(G::class_angle(x), spec.t());
        return spec.beta() * (G::re_trace(x) - 2.0);
    }
}

// ---- local structure -------------------------------------------------------

// For the positive bond (x, mu): T+ and T- such that the two plaquettes
// through the bond have holonomies conjugate to U(b) T+ and U(b) T-.
template <LieGroup G>
std::array<typename G::Element, 2> staples(const GaugeField<G>& U, Dir mu, int i, int j) {
    const Dir nu = other(mu);
    const int di = mu == Dir::e1 ? 1 : 0, dj = 1 - di;
    const int ni = 1 - di, nj = 1 - dj;
    const auto mul = [](const auto& a, const auto& b) { return G::multiply(a, b); };
    const auto up = mul(mul(U.link(nu, i + di, j + dj), G::inverse(U.link(mu, i + ni, j + nj))),
                        G::inverse(U.link(nu, i, j)));
    const auto down = mul(mul(G::inverse(U.link(nu, i + di - ni, j + dj - nj)), G::inverse(U.link(mu, i - ni, j - nj))),
                          U.link(nu, i - ni, j - nj));
    return {up, down};
}

// Holonomy of the plaquette with south-west corner (i, j), read from that corner.
template <LieGroup G>
typename G::Element plaquette_at(const GaugeField<G>& U, int i, int j) {
    return G::multiply(G::multiply(U.link(Dir::e1, i, j), U.link(Dir::e2, i + 1, j)),
                       G::multiply(G::inverse(U.link(Dir::e1, i, j + 1)), G::inverse(U.link(Dir::e2, i, j))));
}

// Mean of Re Tr U(dp) / Re Tr 1 over all plaquettes.
template <LieGroup G>
double mean_plaquette_trace(const GaugeField<G>& U) {
    const int L = U.size();
    const double norm_tr = G::re_trace(G::identity());
    double s = 0.0;
    for (int j = 0; j < L; ++j)
        for (int i = 0; i < L; ++i) s += G::re_trace(plaquette_at(U, i, j)) / norm_tr;
    return s / (static_cast<double>(L) * L);
}

// min(1, pi(proposed) / pi(current)) for the two plaquettes through a bond.
template <LieGroup G>
double metropolis_acceptance(const ActionSpec& spec, const std::array<typename G::Element, 2>& st,
                             const typename G::Element& current, const typename G::Element& proposed) {
    const double dl = log_density<G>(spec, G::multiply(proposed, st[0])) + log_density<G>(spec, G::multiply(proposed, st[1])) -
                      log_density<G>(spec, G::multiply(current, st[0])) - log_density<G>(spec, G::multiply(current, st[1]));
    return dl >= 0.0 ? 1.0 : std::exp(dl);
}

// ---- chains ----------------------------------------------------------------

template <LieGroup G>
struct ChainState {
    GaugeField<G> U;
    Rng rng;
    long sweeps = 0;
    long proposed = 0;
    long accepted = 0;
    double sigma = 0.0;
    std::vector<double> acceptance_per_sweep;

    ChainState(int scale, Rng r) : U(scale), rng(std::move(r)) {}
};

namespace detail {

inline double heat_bath_villain_u1(double a, double b, double t, Rng& rng) {
    // conditional ~ Q(phi + a) Q(phi + b): a mixture over k of wrapped
    // normals with mean -a - d_k/2, variance t/2, weight exp(-d_k^2/(4t))
    const double two_pi = 2.0 * std::numbers::pi;
    const double d = U1::wrap(b - a);
    const int K = static_cast<int>(std::ceil((std::sqrt(200.0 * t) + std::numbers::pi) / two_pi));
    double w[64];
    int n = 0;
    double total = 0.0;
    const double w0 = -(d * d) / (4.0 * t);
    for (int k = -K; k <= K && n < 64; ++k, ++n) {
        const double dk = d + two_pi * k;
        w[n] = std::exp(-(dk * dk) / (4.0 * t) - w0);
        total += w[n];
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double r = u(rng);
    int pick = 0;
    while (pick < n - 1 && r >= w[pick]) r -= w[pick++];
    const double dk = d + two_pi * (pick - K);
    std::normal_distribution<double> g(0.0, std::sqrt(t / 2.0));
    return U1::wrap(-a - dk / 2.0 + g(rng));
}

inline double heat_bath_wilson_u1(double a, double b, double beta, Rng& rng) {
    // cos(phi + a) + cos(phi + b) = R cos(phi + psi)
    const double x = std::cos(a) + std::cos(b), y = std::sin(a) + std::sin(b);
    const double R = std::hypot(x, y);
    const double psi = std::atan2(y, x);
    return U1::wrap(-psi + sample_von_mises(beta * R, rng));
}

} // namespace detail

// One pass over all positive bonds in slot order. Returns the number of
// bonds visited; `observer` (if set) receives each visited bond slot.
template <LieGroup G>
std::size_t sweep(ChainState<G>& s, const ActionSpec& spec, const std::function<void(std::size_t)>& observer = {}) {
    if (s.U.scale() != spec.scale) throw std::invalid_argument("sweep: scale mismatch");
    const int L = s.U.size();
    std::size_t visited = 0;
    long acc = 0;
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    for (int o = 0; o < L; ++o) {
        for (Dir mu : {Dir::e1, Dir::e2}) {
            for (int p = 0; p < L; ++p) {
                const int i = mu == Dir::e1 ? p : o, j = mu == Dir::e1 ? o : p;
                const auto st = staples(s.U, mu, i, j);
                auto& link = s.U.link(mu, i, j);
                if constexpr (std::is_same_v<G, U1>) {
                    const double a = st[0].theta, b = st[1].theta;
                    link.theta = spec.kind == ActionKind::villain ? detail::heat_bath_villain_u1(a, b, spec.t(), s.rng)
                                                                  : detail::heat_bath_wilson_u1(a, b, spec.beta(), s.rng);
                    ++acc;
                } else {
                    typename G::Algebra xi;
                    for (int k = 0; k < G::algebra_dim; ++k) xi.c[k] = s.sigma * gauss(s.rng);
                    const auto prop = G::multiply(G::exp(xi), link);
                    const double dl = log_density<G>(spec, G::multiply(prop, st[0])) +
                                      log_density<G>(spec, G::multiply(prop, st[1])) -
                                      log_density<G>(spec, G::multiply(link, st[0])) -
                                      log_density<G>(spec, G::multiply(link, st[1]));
                    if (dl >= 0.0 || std::log(unif(s.rng)) < dl) {
                        link = prop;
                        ++acc;
                    }
                }
                if (observer) observer(bond_slot(s.U.scale(), mu, o, p));
                ++visited;
            }
        }
    }
    s.proposed += static_cast<long>(visited);
    s.accepted += acc;
    s.acceptance_per_sweep.push_back(static_cast<double>(acc) / static_cast<double>(visited));
    ++s.sweeps;
    return visited;
}

struct ChainSettings {
    int burnin = -1;            // -1: 10 * 4^N sweeps
    int thin = -1;              // -1: 4^N sweeps
    int samples = 0;
    double proposal_sigma = 0;  // 0: start from 0.6 sqrt(t) and tune during burn-in
    bool tune = true;
    bool hot_start = false;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

template <LieGroup G>
struct ChainResult {
    std::vector<GaugeField<G>> samples;
    double acceptance = 1.0;     // production acceptance rate
    double sigma = 0.0;          // final proposal width (SU(2))
    int burnin = 0;
    int thin = 0;
    std::vector<double> plaquette_series; // per production sweep
    double tau_int = 0.5;                 // in sweeps
};

inline int default_burnin(int scale) { return 10 * (1 << (2 * scale)); }
inline int default_thin(int scale) { return 1 << (2 * scale); }

template <LieGroup G>
ChainResult<G> run_chain(const ActionSpec& spec, const ChainSettings& cfg) {
    ChainState<G> s(spec.scale, make_stream(cfg.seed, cfg.stream));
    if (cfg.hot_start)
        for (auto& v : s.U.values()) v = G::haar(s.rng);
    s.sigma = cfg.proposal_sigma > 0.0 ? cfg.proposal_sigma : 0.6 * std::sqrt(spec.t());
    ChainResult<G> out;
    out.burnin = cfg.burnin >= 0 ? cfg.burnin : default_burnin(spec.scale);
    out.thin = cfg.thin > 0 ? cfg.thin : default_thin(spec.scale);
    const bool metropolis = !std::is_same_v<G, U1>;

    long window_acc = 0, window_prop = 0;
    for (int k = 0; k < out.burnin; ++k) {
        const long a0 = s.accepted, p0 = s.proposed;
        sweep(s, spec);
        window_acc += s.accepted - a0;
        window_prop += s.proposed - p0;
        if (metropolis && cfg.tune && (k + 1) % 10 == 0) {
            const double rate = static_cast<double>(window_acc) / static_cast<double>(window_prop);
            s.sigma = std::clamp(s.sigma * std::exp(2.0 * (rate - 0.5)), 1e-8, std::numbers::pi);
            window_acc = window_prop = 0;
        }
    }
    const long a0 = s.accepted, p0 = s.proposed;
    out.samples.reserve(static_cast<std::size_t>(cfg.samples));
    for (int n = 0; n < cfg.samples; ++n) {
        for (int k = 0; k < out.thin; ++k) {
            sweep(s, spec);
            out.plaquette_series.push_back(mean_plaquette_trace(s.U));
        }
        out.samples.push_back(s.U);
    }
    if (s.proposed > p0) out.acceptance = static_cast<double>(s.accepted - a0) / static_cast<double>(s.proposed - p0);
    out.sigma = s.sigma;
    out.tau_int = stats::integrated_autocorrelation(out.plaquette_series);
    return out;
}

// Runs `chains` independent chains (stream id = chain index) on up to
// `workers` threads; results are ordered by chain index.
template <LieGroup G>
std::vector<ChainResult<G>> run_chains(const ActionSpec& spec, ChainSettings cfg, int chains, int workers = 1) {
    std::vector<ChainResult<G>> out(static_cast<std::size_t>(std::max(chains, 0)));
    auto job = [&](int c) {
        ChainSettings local = cfg;
        local.stream = static_cast<std::uint64_t>(c);
        out[static_cast<std::size_t>(c)] = run_chain<G>(spec, local);
    };
    if (workers <= 1 || chains <= 1) {
        for (int c = 0; c < chains; ++c) job(c);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < std::min(workers, chains); ++w)
        pool.emplace_back([&] {
            for (int c = next++; c < chains; c = next++) job(c);
        });
    pool.clear();
    return out;
}

// ---- action conditions -----------------------------------------------------

struct ConditionsReport {
    double beta = 2.0;
    double moment_quadrature = 0.0; // int |log x|^beta Q_N(x) dx
    double ratio_quadrature = 0.0;  // moment / 2^{-beta N}
    int samples = 0;
    double moment_mc = 0.0;
    double ratio_mc = 0.0;
    double mc_stderr = 0.0;
    int convolution_power = 1;      // M = max(1, 2^{2N-3})
    bool convolution_checked = false;
    double convolution_min = 0.0;
    double convolution_max = 0.0;
    std::optional<bool> convolution_pass; // none when N <= 1 or G = SU(2)
    std::string note;
};

// Normalised density of the class angle on [0, pi] (both groups).
template <LieGroup G>
double class_angle_log_weight(const ActionSpec& spec, double theta) {
    const double w = log_density<G>(spec, element_with_angle<G>(theta));
    if constexpr (std::is_same_v<G, U1>) {
        return w;
    } else {
        const double s = std::sin(theta);
        return s > 0.0 ? w + 2.0 * std::log(s) : -INFINITY;
    }
}

// Integral of theta^beta against the normalised class-angle law, by
// adaptive Gauss-Kronrod quadrature.
double class_angle_moment(const std::function<double(double)>& log_weight, double width, double beta);

// Samples from a class-angle law via a tabulated inverse CDF.
class ClassAngleSampler {
public:
    ClassAngleSampler(const std::function<double(double)>& log_weight, double width, int points = 1 << 16);
    double operator()(Rng& rng) const;

private:
    std::vector<double> grid_, cdf_;
};

// Min and max over a uniform grid of the M-fold convolution power of the
// normalised U(1) weight, from its Fourier series in 50-digit arithmetic.
struct ConvolutionExtrema {
    double min = 0.0;
    double max = 0.0;
};
ConvolutionExtrema u1_convolution_extrema(const ActionSpec& spec, long M, int grid = 1024);

template <LieGroup G>
ConditionsReport check_conditions(const ActionSpec& spec, double beta, int samples, Rng& rng) {
    if (beta < 2.0) throw std::invalid_argument("check_conditions: beta must be >= 2");
    ConditionsReport r;
    r.beta = beta;
    r.samples = samples;
    const auto lw = [&](double th) { return class_angle_log_weight<G>(spec, th); };
    const double width = std::sqrt(spec.t());
    const double scale = std::pow(2.0, -beta * spec.scale);
    r.moment_quadrature = class_angle_moment(lw, width, beta);
    r.ratio_quadrature = r.moment_quadrature / scale;
    if (samples > 0) {
        const ClassAngleSampler draw(lw, width);
        std::vector<double> v(static_cast<std::size_t>(samples));
        for (auto& x : v) x = std::pow(draw(rng), beta);
        r.moment_mc = stats::mean(v);
        r.mc_stderr = std::sqrt(stats::variance(v) / static_cast<double>(samples));
        r.ratio_mc = r.moment_mc / scale;
    }
    r.convolution_power = spec.scale >= 2 ? 1 << (2 * spec.scale - 3) : 1;
    if constexpr (std::is_same_v<G, U1>) {
        const auto ext = u1_convolution_extrema(spec, r.convolution_power);
        r.convolution_checked = true;
        r.convolution_min = ext.min;
        r.convolution_max = ext.max;
        if (spec.scale >= 2) r.convolution_pass = ext.min > 0.0 && std::isfinite(ext.max);
        else r.note = "N <= 1: convolution bounds reported without verdict";
    } else {
        r.note = "convolution bounds for SU(2) not evaluated (unverified)";
    }
    return r;
}

} // namespace ymlat
