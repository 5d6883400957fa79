// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ymlat/gaugefix.hpp"
#include "ymlat/norms.hpp"
#include "ymlat/sampler.hpp"
#include "ymlat/stats.hpp"

using namespace ymlat;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Villain samples, one chain per (group, N). Gauge-fixed observables
// decorrelate much more slowly than plaquettes (global row loops), hence
// the scale-dependent thinning.
template <LieGroup G>
const std::vector<GaugeField<G>>& villain_fields(int N, int count) {
    static std::map<int, std::vector<GaugeField<G>>> cache;
    auto& v = cache[N];
    if (static_cast<int>(v.size()) < count) {
        ChainSettings cs;
        cs.burnin = 16 << N;
        cs.thin = G::simply_connected ? 2 << N : 8;
        cs.samples = count;
        cs.seed = 0xacce97 + 101 * static_cast<std::uint64_t>(N) + (G::simply_connected ? 7 : 0);
        v = run_chain<G>(ActionSpec{ActionKind::villain, N, 4096}, cs).samples;
    }
    return v;
}

double max_contract_residual(const LandauResult<SU2>& r, const GaugeField<SU2>& U) { return contract_residual(r.A, U, r.g); }

// ---- 1 ---------------------------------------------------------------------
Outcome gauge_contract() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& fields = villain_fields<SU2>(5, 50);
    double worst = 0.0;
    for (const auto& U : fields) worst = std::max(worst, max_contract_residual(full_gauge(U, 2, 0.9), U));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-9 && secs <= 120.0,
            fmt("max dist(exp A, U^g) = %.2e over 50 SU(2) fields at N=5 (<= 1e-9), %.1f s (<= 120 s)", worst, secs)};
}

// ---- 2 ---------------------------------------------------------------------
Outcome gauge_invariance() {
    const auto& fields = villain_fields<SU2>(4, 10);
    std::mt19937_64 rng(2024);
    const auto rects = all_rectangles(4);
    double worst_log = 0.0, worst_var = 0.0;
    long skipped = 0, mismatched = 0;
    for (int f = 0; f < 10; ++f) {
        const auto& U = fields[f];
        std::vector<double> logs, vars;
        std::vector<bool> ok;
        for (const auto& r : rects) {
            logs.push_back(norm(SU2::log(holonomy(U, r))));
            try {
                vars.push_back(q_variation(anti_development(U, r), 3.0).value);
                ok.push_back(true);
            } catch (const CutLocusError&) {
                vars.push_back(0.0);
                ok.push_back(false);
            }
        }
        for (int t = 0; t < 20; ++t) {
            const auto Ug = apply_gauge(U, random_gauge_transform<SU2>(4, rng));
            for (std::size_t k = 0; k < rects.size(); ++k) {
                worst_log = std::max(worst_log, std::fabs(norm(SU2::log(holonomy(Ug, rects[k]))) - logs[k]));
                try {
                    const double v = q_variation(anti_development(Ug, rects[k]), 3.0).value;
                    if (!ok[k]) ++mismatched;
                    else worst_var = std::max(worst_var, std::fabs(v - vars[k]));
                } catch (const CutLocusError&) {
                    if (ok[k]) ++mismatched;
                    else ++skipped;
                }
            }
        }
    }
    return {worst_log <= 1e-10 && worst_var <= 1e-10 && mismatched == 0,
            fmt("max | |log U^g| - |log U| | = %.2e, max | |X^g|_var3 - |X|_var3 | = %.2e over %zu rectangles x 200 "
                "transforms (<= 1e-10); cut-locus skips %ld, mismatches %ld",
                worst_log, worst_var, rects.size(), skipped, mismatched)};
}

// ---- 3 ---------------------------------------------------------------------
Outcome plaquette_law() {
    ChainSettings cs;
    cs.burnin = 1000;
    cs.thin = 4;
    cs.samples = 10000;
    cs.seed = 303;
    const auto chain = run_chain<U1>(ActionSpec{ActionKind::villain, 4, 4096}, cs);
    std::vector<double> per_sample;
    per_sample.reserve(chain.samples.size());
    for (const auto& U : chain.samples) {
        double s = 0.0;
        const auto ps = all_plaquettes(4);
        for (const auto& p : ps) {
            const double th = U1::log(holonomy(U, p)).c[0];
            s += th * th;
        }
        per_sample.push_back(s / static_cast<double>(ps.size()));
    }
    // the plaquette angles have mean zero by symmetry
    const double ratio = stats::mean(per_sample) / std::ldexp(1.0, -8);
    const double err = stats::batch_means_error(per_sample) / std::ldexp(1.0, -8);
    return {ratio >= 0.9 && ratio <= 1.1,
            fmt("Var[log U(dp)] / 2^-8 = %.4f +- %.4f (10^4 samples, thin 4; in [0.9, 1.1])", ratio, err)};
}

// ---- 4 ---------------------------------------------------------------------
template <LieGroup G>
std::vector<double> brownian_ratios(int count) {
    const auto& fields = villain_fields<G>(4, count);
    std::vector<double> out;
    for (int k : {1, 2, 4, 8}) {
        double s = 0.0;
        long n = 0;
        for (int f = 0; f < count; ++f)
            for (const auto& r : all_rectangles(4)) {
                if (r.plaquettes() != k) continue;
                const double v = norm(G::log(holonomy(fields[f], r)));
                s += v * v;
                ++n;
            }
        out.push_back(s / n / (G::algebra_dim * std::ldexp(k, -8)));
    }
    return out;
}

Outcome brownian_scaling() {
    bool pass = true;
    std::string detail;
    for (int g = 0; g < 2; ++g) {
        const auto r = g == 0 ? brownian_ratios<U1>(200) : brownian_ratios<SU2>(200);
        const double m = stats::mean(r);
        double dev = 0.0;
        for (double x : r) dev = std::max(dev, std::fabs(x / m - 1.0));
        pass = pass && dev <= 0.15;
        detail += fmt("%s E|log|^2/(dim g |r|) for k=1,2,4,8: %.3f %.3f %.3f %.3f (max dev %.1f%%)%s", g == 0 ? "U(1)" : "SU(2)",
                      r[0], r[1], r[2], r[3], 100 * dev, g == 0 ? "; " : "");
    }
    return {pass, detail + " (<= 15%)"};
}

// ---- 5 ---------------------------------------------------------------------
Outcome landau_quadratic() {
    const auto& fields = villain_fields<SU2>(5, 20);
    std::vector<double> slopes;
    for (int f = 0; f < 20; ++f) {
        const auto r = full_gauge(fields[f], 2, 0.9);
        std::vector<double> x, y;
        for (const auto& s : r.scales) {
            if (s.scale <= 2) continue;
            x.push_back(std::log(s.max_delta * s.max_delta));
            y.push_back(std::log(s.max_E));
        }
        slopes.push_back(stats::slope(x, y));
    }
    const double su2 = stats::median(slopes);
    const auto& abelian = villain_fields<U1>(5, 10);
    double worst = 0.0;
    for (int f = 0; f < 10; ++f)
        for (const auto& s : landau_gauge(abelian[f], 2).scales) worst = std::max(worst, s.max_E);
    const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
    return {su2 >= 0.9 && worst <= 1e-12,
            fmt("SU(2) median slope of log max|E| vs log delta^2 over N=3..5 = %.3f (range %.3f..%.3f, 20 fields; >= 0.9); "
                "U(1) max|E| = %.1e (<= 1e-12)",
                su2, *lo, *hi, worst)};
}

// ---- 6 ---------------------------------------------------------------------
Outcome axial_decay() {
    std::vector<double> ns, ys;
    std::string vals;
    for (int N : {3, 4, 5}) {
        const auto& fields = villain_fields<SU2>(N, 30);
        std::vector<double> m;
        for (int f = 0; f < 30; ++f) m.push_back(max_bond_norm(axial_gauge(fields[f], 0.9).A));
        ns.push_back(N);
        ys.push_back(std::log2(stats::median(m)));
        vals += fmt(" %.3f", stats::median(m));
    }
    const double s = stats::slope(ns, ys);
    return {s <= -0.3, fmt("median max|A^N| for N=3,4,5:%s; slope of log2 = %.3f (<= -0.3)", vals.c_str(), s)};
}

// ---- 7 ---------------------------------------------------------------------
Outcome bonds_bound() {
    const auto& fields = villain_fields<SU2>(5, 50);
    int decreasing = 0;
    for (const auto& U : fields) {
        const auto r = full_gauge(U, 2, 0.9);
        bool ok = true;
        for (std::size_t k = 1; k < r.scales.size(); ++k)
            if (r.scales[k - 1].scale >= 3 && !(r.scales[k].max_bond_norm < r.scales[k - 1].max_bond_norm)) ok = false;
        decreasing += ok;
    }
    return {decreasing >= 40, fmt("max|A^N| decreasing over N=3..5 in %d of 50 samples (>= 80%%)", decreasing)};
}

// ---- 8 ---------------------------------------------------------------------
template <LieGroup G>
std::pair<double, double> naive_norms(const OneForm<G>& A, double alpha) {
    const auto segs = all_segments(A.scale());
    double gr = 0.0, rho = 0.0;
    for (const auto& a : segs) {
        const auto va = segment_integral(A, a);
        gr = std::max(gr, norm(va) / gr_denominator(a.length, a.scale, alpha));
        for (const auto& b : segs) {
            if (b.dir != a.dir || b.start != a.start || b.length != a.length || b.offset == a.offset) continue;
            const int d = torus_distance(a.offset, b.offset, a.scale);
            rho = std::max(rho, norm(va - segment_integral(A, b)) / rho_denominator(a.length, d, a.scale, alpha));
        }
    }
    return {gr, rho};
}

Outcome scan_oracles() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int norm_mismatch = 0;
    for (int f = 0; f < 100; ++f) {
        const double alpha = std::max(1e-3, u(rng)), sigma = 0.05 + u(rng);
        bool same;
        if (f % 2) {
            const auto A = random_one_form<SU2>(3, rng, sigma);
            const auto r = compute_norms(A, alpha);
            const auto [gr, rho] = naive_norms(A, alpha);
            same = r.gr_norm == gr && r.rho_norm == rho;
        } else {
            const auto A = random_one_form<U1>(3, rng, sigma);
            const auto r = compute_norms(A, alpha);
            const auto [gr, rho] = naive_norms(A, alpha);
            same = r.gr_norm == gr && r.rho_norm == rho;
        }
        norm_mismatch += !same;
    }
    int var_mismatch = 0;
    const double qs[] = {1.0, 1.5, 2.0, 3.0, 4.0};
    std::uniform_int_distribution<int> len(1, 12);
    for (int t = 0; t < 1000; ++t) {
        AntiDevelopment<SU2> X;
        X.points.emplace_back();
        const int n = len(rng);
        while (static_cast<int>(X.points.size()) < n) X.points.push_back(X.points.back() + random_algebra<SU2>(rng, 0.5));
        const double q = qs[t % 5];
        const auto r = q_variation(X, q);
        double best = 0.0;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            double s = 0.0;
            int last = -1;
            for (int i = 0; i < n; ++i) {
                if (!(mask >> i & 1u)) continue;
                if (last >= 0) s += std::pow(norm(X.points[i] - X.points[last]), q);
                last = i;
            }
            best = std::max(best, s);
        }
        const auto dist = [](const SU2::Algebra& a, const SU2::Algebra& b) { return norm(a - b); };
        const bool ok = r.value == std::pow(best, 1.0 / q) &&
                        variation_of<SU2::Algebra>(X.points, r.indices, q, dist) == r.value;
        var_mismatch += !ok;
    }
    return {norm_mismatch == 0 && var_mismatch == 0,
            fmt("gr/rho scan vs naive oracle at N=3: %d of 100 fields differ; q-variation vs enumeration (length <= 12): "
                "%d of 1000 differ (exact equality)",
                norm_mismatch, var_mismatch)};
}

// ---- 9 ---------------------------------------------------------------------
Outcome dyadic_constants() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst_gr = 0.0, worst_rho = 0.0; // largest norm(approx) / (constant * norm(A))
    int violations = 0;
    for (int f = 0; f < 100; ++f) {
        const auto A = random_one_form<SU2>(4, rng, u(rng));
        for (double a : {0.3, 0.5, 0.9}) {
            const auto base = compute_norms(A, a);
            const double cg = std::pow(3.0, 1.0 - a), cr = std::pow(3.0, 1.0 - a / 2.0);
            for (Dir mu : {Dir::e1, Dir::e2})
                for (int nb = 0; nb < 4; ++nb) {
                    const auto r = compute_norms(dyadic_approximant(A, nb, mu), a);
                    if (r.gr_norm > cg * base.gr_norm + 1e-12 || r.rho_norm > cr * base.rho_norm + 1e-12) ++violations;
                    worst_gr = std::max(worst_gr, r.gr_norm / (cg * base.gr_norm));
                    worst_rho = std::max(worst_rho, r.rho_norm / (cr * base.rho_norm));
                }
        }
    }
    return {violations == 0, fmt("100 fields at N=4, alpha in {0.3,0.5,0.9}, both directions, Nbar=0..3: %d violations; "
                                 "max gr ratio %.3f, max rho ratio %.3f (<= 1)",
                                 violations, worst_gr, worst_rho)};
}

// ---- 10 --------------------------------------------------------------------
Outcome hoelder_dH() {
    const auto& fields = villain_fields<SU2>(4, 5);
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    for (int f = 0; f < 5; ++f) {
        const auto A = full_gauge(fields[f], 2, 0.9).A;
        for (double a : {0.3, 0.6, 0.9}) worst = std::max(worst, hoelder_dH_check(A, a, compute_norms(A, a), 100000, rng));
    }
    return {worst <= 1.0 + 1e-9,
            fmt("max ratio = %.4f over 10^5 random pairs x 5 gauge-fixed fields x alpha in {0.3,0.6,0.9} (<= 1)", worst)};
}

// ---- 11 --------------------------------------------------------------------
Outcome tightness() {
    std::vector<double> med;
    for (int N : {4, 5, 6}) {
        const auto& fields = villain_fields<SU2>(N, 50);
        std::vector<double> v;
        for (int f = 0; f < 50; ++f) v.push_back(compute_norms(full_gauge(fields[f], 2, 0.9).A, 0.4).total());
        med.push_back(stats::median(v));
    }
    const double spread = *std::max_element(med.begin(), med.end()) / *std::min_element(med.begin(), med.end());
    return {spread <= 2.0,
            fmt("median |A|_0.4 for N1=4,5,6: %.3f %.3f %.3f; max/min = %.3f (<= 2)", med[0], med[1], med[2], spread)};
}

// ---- 12 --------------------------------------------------------------------
// E|theta|^2 under the wrapped Gaussian of variance t, by direct quadrature.
double wrapped_gaussian_moment(double t) {
    using boost::math::quadrature::gauss_kronrod;
    const double pi = std::numbers::pi;
    const auto w = [t, pi](double th) {
        double s = 0.0;
        for (int n = -3; n <= 3; ++n) s += std::exp(-(th + 2 * pi * n) * (th + 2 * pi * n) / (2 * t));
        return s;
    };
    const double cut = std::min(pi, 40.0 * std::sqrt(t));
    const double num = gauss_kronrod<double, 61>::integrate([&](double th) { return th * th * w(th); }, 0.0, cut, 20, 1e-14) +
                       gauss_kronrod<double, 61>::integrate([&](double th) { return th * th * w(th); }, cut, pi, 20, 1e-14);
    const double den = gauss_kronrod<double, 61>::integrate(w, 0.0, cut, 20, 1e-14) +
                       gauss_kronrod<double, 61>::integrate(w, cut, pi, 20, 1e-14);
    return num / den;
}

Outcome moment_condition() {
    bool pass = true;
    std::string vals;
    for (int N : {3, 4, 5}) {
        Rng rng = make_stream(1212, N);
        const ActionSpec spec{ActionKind::villain, N, 4096};
        const auto rep = check_conditions<U1>(spec, 2.0, 0, rng);
        const double oracle = wrapped_gaussian_moment(spec.t()) / spec.t();
        pass = pass && rep.ratio_quadrature >= 0.95 && rep.ratio_quadrature <= 1.05 &&
               std::fabs(rep.ratio_quadrature - oracle) <= 1e-8;
        vals += fmt(" N=%d: %.8f (direct %.8f)", N, rep.ratio_quadrature, oracle);
    }
    return {pass, "E|log x|^2 / 2^-2N:" + vals + " (in [0.95, 1.05])"};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"gauge contract", gauge_contract},     {"gauge invariance", gauge_invariance},
        {"plaquette law", plaquette_law},       {"Brownian scaling", brownian_scaling},
        {"Landau error quadratic", landau_quadratic}, {"axial decay", axial_decay},
        {"bonds bound decay", bonds_bound},     {"norm scan oracles", scan_oracles},
        {"dyadic approximant", dyadic_constants}, {"Hoelder in d_H", hoelder_dH},
        {"tightness proxy", tightness},         {"moment condition", moment_condition},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2zu %-22s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("acceptance: %zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
