#include "ymlat/sampler.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ymlat/errors.hpp"

namespace ymlat {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

int image_count(double t) { return std::min(30, 1 + static_cast<int>(std::ceil(std::sqrt(80.0 * t) / two_pi))); }

// Small fixed-capacity list of signed log-magnitudes.
struct Terms {
    std::array<std::pair<int, double>, 64> v;
    int n = 0;
    void add(int s, double l) {
        if (n < 64) v[n++] = {s, l};
    }
};

// log |sum_k s_k exp(l_k)|, with the sign of the sum returned in `sign`.
double signed_log_sum(const Terms& terms, int& sign) {
    double m = -INFINITY;
    for (int k = 0; k < terms.n; ++k)
        if (terms.v[k].first != 0) m = std::max(m, terms.v[k].second);
    if (!std::isfinite(m)) {
        sign = 0;
        return -INFINITY;
    }
    double acc = 0.0;
    for (int k = 0; k < terms.n; ++k)
        if (terms.v[k].first != 0) acc += terms.v[k].first * std::exp(terms.v[k].second - m);
    sign = acc > 0.0 ? 1 : (acc < 0.0 ? -1 : 0);
    return m + std::log(std::fabs(acc));
}

} // namespace

ActionKind parse_action(std::string_view s) {
    if (s == "wilson") return ActionKind::wilson;
    if (s == "villain") return ActionKind::villain;
    throw std::invalid_argument("unknown action '" + std::string(s) + "'");
}

std::string_view to_string(ActionKind k) { return k == ActionKind::wilson ? "wilson" : "villain"; }

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x59u};
    return Rng(seq);
}

double villain_u1_sum(double theta, double t) {
    theta = U1::wrap(theta);
    const int K = image_count(t);
    double s = 0.0;
    for (int n = -K; n <= K; ++n) {
        const double u = theta + two_pi * n;
        s += std::exp(-u * u / (2.0 * t));
    }
    return s;
}

double villain_u1_log_sum(double theta, double t) {
    theta = U1::wrap(theta);
    const int K = image_count(t);
    Terms terms;
    for (int n = -K; n <= K; ++n) {
        const double u = theta + two_pi * n;
        terms.add(1, -u * u / (2.0 * t));
    }
    int sign = 0;
    return signed_log_sum(terms, sign);
}

double villain_su2_character_sum(double theta, double t, int truncation) {
    theta = std::clamp(theta, 0.0, pi);
    const double s = std::sin(theta);
    const bool at_zero = theta < 1e-12, at_pi = pi - theta < 1e-12;
    double sum = 0.0;
    for (int l = 0; l < truncation; ++l) {
        const double m = l + 1.0;
        const double w = std::exp(-t * l * (l + 2.0) / 2.0);
        double chi;
        if (at_zero) chi = m;
        else if (at_pi) chi = (l % 2 == 0) ? m : -m;
        else chi = std::sin(m * theta) / s;
        sum += m * w * chi;
        // (l+1)^2 e^{-t l(l+2)/2} is decreasing once l + 1 > 2/sqrt(t)
        if (m * m * w < 1e-14 && m * std::sqrt(t) > 2.0) break;
    }
    if (!(sum > 0.0)) throw NonPositiveDensity("truncated character sum is not positive");
    return sum;
}

double villain_su2_log_kernel(double theta, double t) {
    theta = std::clamp(theta, 0.0, pi);
    const int K = image_count(t);
    Terms terms;
    double shift = 0.0;
    int flip = 1;
    // f(theta) = sum_n g(theta + 2 pi n) / sin(theta), g(u) = u e^{-u^2/(2t)}
    const auto dg = [&](double u) {
        const double a = 1.0 - u * u / t;
        const int s = a > 0.0 ? 1 : (a < 0.0 ? -1 : 0);
        terms.add(s, std::log(std::fabs(a)) - u * u / (2.0 * t));
    };
    if (theta < 1e-10) {
        for (int n = -K; n <= K; ++n) dg(two_pi * n);
    } else if (pi - theta < 1e-10) {
        for (int n = -K - 1; n <= K; ++n) dg(pi + two_pi * n);
        flip = -1;
    } else {
        for (int n = -K; n <= K; ++n) {
            const double u = theta + two_pi * n;
            terms.add(u > 0.0 ? 1 : -1, std::log(std::fabs(u)) - u * u / (2.0 * t));
        }
        shift = -std::log(std::sin(theta));
    }
    int sign = 0;
    const double l = signed_log_sum(terms, sign);
    if (sign * flip <= 0) throw NonPositiveDensity("heat kernel evaluation is not positive");
    const double log_c = t / 2.0 + 0.5 * std::log(two_pi) - std::log(2.0) - 1.5 * std::log(t);
    return l + shift + log_c;
}

double sample_von_mises(double kappa, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (kappa < 1e-8) return U1::wrap(pi * (2.0 * u(rng) - 1.0));
    const double a = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double b = (a - std::sqrt(2.0 * a)) / (2.0 * kappa);
    const double r = (1.0 + b * b) / (2.0 * b);
    const double r2m1 = (1.0 - b * b) * (1.0 - b * b) / (4.0 * b * b);
    for (;;) {
        const double z = std::cos(pi * u(rng));
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * r2m1 / (r + z);
        const double u2 = u(rng);
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double th = std::acos(std::clamp(f, -1.0, 1.0));
            return u(rng) < 0.5 ? -th : th;
        }
    }
}

double class_angle_moment(const std::function<double(double)>& log_weight, double width, double beta) {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> cuts{0.0};
    for (double k : {2.0, 6.0, 20.0, 60.0})
        if (k * width < pi) cuts.push_back(k * width);
    cuts.push_back(pi);
    double m = -INFINITY;
    for (int k = 1; k <= 400; ++k) m = std::max(m, log_weight(cuts[1] * k / 400.0));
    const auto w = [&](double th) { return std::exp(log_weight(th) - m); };
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        den += gauss_kronrod<double, 31>::integrate(w, cuts[k], cuts[k + 1], 15, 1e-14);
        num += gauss_kronrod<double, 31>::integrate([&](double th) { return std::pow(th, beta) * w(th); }, cuts[k],
                                                    cuts[k + 1], 15, 1e-14);
    }
    return num / den;
}

ClassAngleSampler::ClassAngleSampler(const std::function<double(double)>& log_weight, double width, int points) {
    const double top = std::min(pi, 40.0 * width);
    grid_.resize(static_cast<std::size_t>(points) + 1);
    std::vector<double> lw(grid_.size());
    double m = -INFINITY;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        grid_[k] = top * static_cast<double>(k) / points;
        lw[k] = log_weight(grid_[k]);
        m = std::max(m, lw[k]);
    }
    cdf_.assign(grid_.size(), 0.0);
    for (std::size_t k = 1; k < grid_.size(); ++k)
        cdf_[k] = cdf_[k - 1] + 0.5 * (std::exp(lw[k - 1] - m) + std::exp(lw[k] - m)) * (grid_[k] - grid_[k - 1]);
    const double total = cdf_.back();
    for (auto& c : cdf_) c /= total;
}

double ClassAngleSampler::operator()(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = u(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), p);
    if (it == cdf_.end()) return grid_.back();
    const auto k = static_cast<std::size_t>(it - cdf_.begin());
    const double lo = cdf_[k - 1], hi = cdf_[k];
    const double f = hi > lo ? (p - lo) / (hi - lo) : 0.5;
    return grid_[k - 1] + f * (grid_[k] - grid_[k - 1]);
}

ConvolutionExtrema u1_convolution_extrema(const ActionSpec& spec, long M, int grid) {
    using mp = boost::multiprecision::cpp_bin_float_50;
    if (M < 1) throw std::invalid_argument("convolution power must be >= 1");
    std::vector<mp> c{mp(1)}; // coefficients of the M-fold power
    const mp Mm(M);
    if (spec.kind == ActionKind::villain) {
        const mp t(spec.t());
        for (int n = 1;; ++n) {
            const mp v = exp(-Mm * t * n * n / 2);
            c.push_back(v);
            if (v < mp("1e-45")) break;
        }
    } else {
        const mp kappa(spec.beta());
        const int top = static_cast<int>(std::ceil(std::sqrt(240.0 * spec.beta() / static_cast<double>(M)))) + 40;
        // I_n / I_{n-1} by backward continued fraction
        std::vector<mp> r(static_cast<std::size_t>(top) + 2, mp(0));
        mp next(0);
        for (int n = top + 200; n >= 1; --n) {
            next = 1 / (2 * mp(n) / kappa + next);
            if (n <= top) r[static_cast<std::size_t>(n)] = next;
        }
        mp ratio(1);
        for (int n = 1; n <= top; ++n) {
            ratio *= r[static_cast<std::size_t>(n)];
            c.push_back(pow(ratio, M));
        }
    }
    ConvolutionExtrema out{INFINITY, -INFINITY};
    for (int k = 0; k < grid; ++k) {
        const mp th = -boost::math::constants::pi<mp>() + 2 * boost::math::constants::pi<mp>() * k / grid;
        const mp ct = cos(th);
        mp prev(1), cur = ct, sum = c[0];
        for (std::size_t n = 1; n < c.size(); ++n) {
            sum += 2 * c[n] * cur;
            const mp nx = 2 * ct * cur - prev;
            prev = cur;
            cur = nx;
        }
        const double v = sum.convert_to<double>();
        out.min = std::min(out.min, v);
        out.max = std::max(out.max, v);
    }
    return out;
}

} // namespace ymlat
