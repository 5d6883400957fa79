#pragma once

// Gauge fields, one-forms and gauge transforms on the dyadic torus.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ymlat/group.hpp"
#include "ymlat/lattice.hpp"

namespace ymlat {

template <LieGroup G>
class GaugeField {
public:
    using Element = typename G::Element;

    explicit GaugeField(int scale)
        : scale_(scale), mask_(lattice_size(scale) - 1), links_(bond_count(scale), G::identity()) {}

    int scale() const { return scale_; }
    int size() const { return mask_ + 1; }

    // Positively oriented bond at (i, j) in direction d; coordinates wrap.
    const Element& link(Dir d, int i, int j) const { return links_[slot(d, i, j)]; }
    Element& link(Dir d, int i, int j) { return links_[slot(d, i, j)]; }
    const Element& link(const LatticeCoord& x, Dir d) const { return link(d, x.i, x.j); }

    Element operator()(const LatticeBond& b) const {
        const auto& p = b.positive() ? b : b.reversed();
        const Element& v = link(p.base, p.dir);
        return b.positive() ? v : G::inverse(v);
    }
    void set(const LatticeBond& b, const Element& v) {
        const auto p = b.positive_form();
        link(p.dir, p.base.i, p.base.j) = b.positive() ? v : G::inverse(v);
    }

    const std::vector<Element>& values() const { return links_; }
    std::vector<Element>& values() { return links_; }

private:
    std::size_t slot(Dir d, int i, int j) const {
        i &= mask_;
        j &= mask_;
        return d == Dir::e1 ? bond_slot(scale_, Dir::e1, j, i) : bond_slot(scale_, Dir::e2, i, j);
    }

    int scale_;
    int mask_;
    std::vector<Element> links_;
};

template <LieGroup G>
class OneForm {
public:
    using Algebra = typename G::Algebra;

    explicit OneForm(int scale) : scale_(scale), mask_(lattice_size(scale) - 1), values_(bond_count(scale)) {}

    int scale() const { return scale_; }
    int size() const { return mask_ + 1; }

    const Algebra& value(Dir d, int i, int j) const { return values_[slot(d, i, j)]; }
    Algebra& value(Dir d, int i, int j) { return values_[slot(d, i, j)]; }
    const Algebra& value(const LatticeCoord& x, Dir d) const { return value(d, x.i, x.j); }
    Algebra& value(const LatticeCoord& x, Dir d) { return value(d, x.i, x.j); }

    Algebra operator()(const LatticeBond& b) const {
        const auto p = b.positive_form();
        const Algebra& v = value(p.base, p.dir);
        return b.positive() ? v : -v;
    }
    void set(const LatticeBond& b, const Algebra& v) {
        const auto p = b.positive_form();
        value(p.base, p.dir) = b.positive() ? v : -v;
    }

    // Row of bonds in direction d at perpendicular coordinate `offset`,
    // indexed by position along d.
    const Algebra* row(Dir d, int offset) const { return &values_[bond_slot(scale_, d, offset & mask_, 0)]; }

    const std::vector<Algebra>& values() const { return values_; }
    std::vector<Algebra>& values() { return values_; }

private:
    std::size_t slot(Dir d, int i, int j) const {
        i &= mask_;
        j &= mask_;
        return d == Dir::e1 ? bond_slot(scale_, Dir::e1, j, i) : bond_slot(scale_, Dir::e2, i, j);
    }

    int scale_;
    int mask_;
    std::vector<Algebra> values_;
};

template <LieGroup G>
class GaugeTransform {
public:
    using Element = typename G::Element;

    explicit GaugeTransform(int scale)
        : scale_(scale), mask_(lattice_size(scale) - 1),
          sites_(static_cast<std::size_t>(size()) * static_cast<std::size_t>(size()), G::identity()) {}

    int scale() const { return scale_; }
    int size() const { return mask_ + 1; }

    const Element& at(int i, int j) const { return sites_[slot(i, j)]; }
    Element& at(int i, int j) { return sites_[slot(i, j)]; }
    const Element& operator()(const LatticeCoord& x) const { return at(x.i, x.j); }
    Element& operator()(const LatticeCoord& x) { return at(x.i, x.j); }

    const std::vector<Element>& values() const { return sites_; }
    std::vector<Element>& values() { return sites_; }

private:
    std::size_t slot(int i, int j) const {
        return static_cast<std::size_t>(j & mask_) * static_cast<std::size_t>(mask_ + 1) +
               static_cast<std::size_t>(i & mask_);
    }

    int scale_;
    int mask_;
    std::vector<Element> sites_;
};

template <LieGroup G>
struct AntiDevelopment {
    std::vector<typename G::Algebra> points; // X_0 = 0, ..., X_k
};

// ---- coarsening ------------------------------------------------------------

template <LieGroup G>
OneForm<G> coarsen(const OneForm<G>& A, int coarse_scale) {
    const int N = A.scale();
    if (coarse_scale < 0 || coarse_scale > N) throw std::invalid_argument("coarsen: need 0 <= Nbar <= N");
    const int R = 1 << (N - coarse_scale);
    OneForm<G> out(coarse_scale);
    const int Lc = out.size();
    for (int J = 0; J < Lc; ++J) {
        for (int I = 0; I < Lc; ++I) {
            typename G::Algebra s1{}, s2{};
            for (int u = 0; u < R; ++u) {
                s1 += A.value(Dir::e1, I * R + u, J * R);
                s2 += A.value(Dir::e2, I * R, J * R + u);
            }
            out.value(Dir::e1, I, J) = s1;
            out.value(Dir::e2, I, J) = s2;
        }
    }
    return out;
}

template <LieGroup G>
GaugeField<G> coarsen(const GaugeField<G>& U, int coarse_scale) {
    const int N = U.scale();
    if (coarse_scale < 0 || coarse_scale > N) throw std::invalid_argument("coarsen: need 0 <= Nbar <= N");
    const int R = 1 << (N - coarse_scale);
    GaugeField<G> out(coarse_scale);
    const int Lc = out.size();
    for (int J = 0; J < Lc; ++J) {
        for (int I = 0; I < Lc; ++I) {
            auto p1 = G::identity();
            auto p2 = G::identity();
            for (int u = 0; u < R; ++u) {
                p1 = G::multiply(p1, U.link(Dir::e1, I * R + u, J * R));
                p2 = G::multiply(p2, U.link(Dir::e2, I * R, J * R + u));
            }
            out.link(Dir::e1, I, J) = p1;
            out.link(Dir::e2, I, J) = p2;
        }
    }
    return out;
}

// Restriction of a gauge transform to the coarse vertices.
template <LieGroup G>
GaugeTransform<G> coarsen(const GaugeTransform<G>& g, int coarse_scale) {
    const int N = g.scale();
    if (coarse_scale < 0 || coarse_scale > N) throw std::invalid_argument("coarsen: need 0 <= Nbar <= N");
    const int R = 1 << (N - coarse_scale);
    GaugeTransform<G> out(coarse_scale);
    for (int J = 0; J < out.size(); ++J)
        for (int I = 0; I < out.size(); ++I) out.at(I, J) = g.at(I * R, J * R);
    return out;
}

// ---- gauge action ----------------------------------------------------------

template <LieGroup G>
GaugeField<G> apply_gauge(const GaugeField<G>& U, const GaugeTransform<G>& g) {
    if (U.scale() != g.scale()) throw std::invalid_argument("apply_gauge: scale mismatch");
    GaugeField<G> out(U.scale());
    const int L = U.size();
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i < L; ++i) {
            const auto& gx = g.at(i, j);
            out.link(Dir::e1, i, j) = G::multiply(G::multiply(gx, U.link(Dir::e1, i, j)), G::inverse(g.at(i + 1, j)));
            out.link(Dir::e2, i, j) = G::multiply(G::multiply(gx, U.link(Dir::e2, i, j)), G::inverse(g.at(i, j + 1)));
        }
    }
    return out;
}

// Pointwise product (h g)(x) = h(x) g(x); U^{hg} = (U^g)^h.
template <LieGroup G>
GaugeTransform<G> compose(const GaugeTransform<G>& h, const GaugeTransform<G>& g) {
    if (h.scale() != g.scale()) throw std::invalid_argument("compose: scale mismatch");
    GaugeTransform<G> out(g.scale());
    for (std::size_t k = 0; k < out.values().size(); ++k) out.values()[k] = G::multiply(h.values()[k], g.values()[k]);
    return out;
}

template <LieGroup G>
GaugeField<G> exp_field(const OneForm<G>& A) {
    GaugeField<G> U(A.scale());
    for (std::size_t k = 0; k < U.values().size(); ++k) U.values()[k] = G::exp(A.values()[k]);
    return U;
}

template <LieGroup G>
OneForm<G> log_field(const GaugeField<G>& U) {
    OneForm<G> A(U.scale());
    for (std::size_t k = 0; k < A.values().size(); ++k) A.values()[k] = G::log(U.values()[k]);
    return A;
}

// max over bonds of d(exp A(b), U^g(b))
template <LieGroup G>
double contract_residual(const OneForm<G>& A, const GaugeField<G>& U, const GaugeTransform<G>& g) {
    const auto Ug = apply_gauge(U, g);
    double worst = 0.0;
    for (std::size_t k = 0; k < Ug.values().size(); ++k)
        worst = std::max(worst, distance<G>(G::exp(A.values()[k]), Ug.values()[k]));
    return worst;
}

template <LieGroup G>
double max_bond_norm(const OneForm<G>& A) {
    double m = 0.0;
    for (const auto& v : A.values()) m = std::max(m, norm(v));
    return m;
}

// ---- holonomy --------------------------------------------------------------

template <LieGroup G>
typename G::Element path_holonomy(const GaugeField<G>& U, const std::vector<LatticeBond>& word) {
    auto h = G::identity();
    for (const auto& b : word) h = G::multiply(h, U(b));
    return h;
}

template <LieGroup G>
typename G::Element holonomy(const GaugeField<G>& U, const RectangleR& r) {
    if (r.scale() != U.scale()) throw std::invalid_argument("holonomy: scale mismatch");
    return path_holonomy(U, boundary_word(r));
}

// Incremental holonomies U(dr_t), t = 1..k, along the plaquette chain of r,
// all based at origin(r).
template <LieGroup G>
std::vector<typename G::Element> chain_holonomies(const GaugeField<G>& U, const RectangleR& r) {
    using E = typename G::Element;
    if (r.scale() != U.scale()) throw std::invalid_argument("chain_holonomies: scale mismatch");
    const LatticeCoord s = r.base;
    const LatticeCoord z = origin(r);
    const bool horizontal = r.n == 1;
    auto link = [&](const LatticeCoord& x, Dir d) -> const E& { return U.link(x, d); };
    auto mul = [](const E& x, const E& y) { return G::multiply(x, y); };

    // c: holonomy along the boundary from the south-west corner to z
    E c = G::identity();
    if (z == s.shifted(Dir::e1)) {
        c = link(s, Dir::e1);
    } else if (z == s.shifted(Dir::e2)) {
        c = link(s, Dir::e2);
    } else if (!(z == s)) {
        c = horizontal ? mul(link(s, Dir::e2), link(s.shifted(Dir::e2), Dir::e1))
                       : mul(link(s, Dir::e1), link(s.shifted(Dir::e1), Dir::e2));
    }
    const E ci = G::inverse(c);

    const int k = r.plaquettes();
    std::vector<E> out;
    out.reserve(static_cast<std::size_t>(k));
    if (horizontal) {
        E bottom = G::identity();
        E top = G::identity();
        const E left = G::inverse(link(s, Dir::e2));
        for (int t = 1; t <= k; ++t) {
            bottom = mul(bottom, link(s.shifted(Dir::e1, t - 1), Dir::e1));
            top = mul(G::inverse(link(s.shifted(Dir::e1, t - 1).shifted(Dir::e2), Dir::e1)), top);
            const E& right = link(s.shifted(Dir::e1, t), Dir::e2);
            out.push_back(mul(mul(ci, mul(mul(mul(bottom, right), top), left)), c));
        }
    } else {
        const E bottom = link(s, Dir::e1);
        E right = G::identity();
        E left = G::identity();
        for (int t = 1; t <= k; ++t) {
            right = mul(right, link(s.shifted(Dir::e1).shifted(Dir::e2, t - 1), Dir::e2));
            left = mul(G::inverse(link(s.shifted(Dir::e2, t - 1), Dir::e2)), left);
            const E top = G::inverse(link(s.shifted(Dir::e2, t), Dir::e1));
            out.push_back(mul(mul(ci, mul(mul(mul(bottom, right), top), left)), c));
        }
    }
    return out;
}

template <LieGroup G>
AntiDevelopment<G> anti_development(const GaugeField<G>& U, const RectangleR& r) {
    const auto hs = chain_holonomies(U, r);
    AntiDevelopment<G> X;
    X.points.reserve(hs.size() + 1);
    X.points.emplace_back();
    auto prev = G::identity();
    for (const auto& h : hs) {
        const auto inc = G::log_checked(G::multiply(G::inverse(prev), h));
        if (inc.near_cut_locus) throw CutLocusError("anti_development: increment near the cut locus");
        X.points.push_back(X.points.back() + inc.value);
        prev = h;
    }
    return X;
}

// ---- segment integrals -----------------------------------------------------

template <LieGroup G>
typename G::Algebra segment_integral(const OneForm<G>& A, const AxisSegment& s) {
    typename G::Algebra sum{};
    const auto* row = A.row(s.dir, s.offset);
    const int mask = A.size() - 1;
    for (int u = 0; u < s.length; ++u) sum += row[(s.start + u) & mask];
    return sum;
}

// O(1) segment integrals from per-row prefix sums.
template <LieGroup G>
class SegmentIntegrator {
public:
    using Algebra = typename G::Algebra;

    explicit SegmentIntegrator(const OneForm<G>& A) : scale_(A.scale()), L_(A.size()) {
        prefix_.resize(static_cast<std::size_t>(2 * L_) * static_cast<std::size_t>(L_ + 1));
        for (Dir d : {Dir::e1, Dir::e2}) {
            for (int o = 0; o < L_; ++o) {
                const auto* row = A.row(d, o);
                Algebra* p = &prefix_[base(d, o)];
                p[0] = Algebra{};
                for (int u = 0; u < L_; ++u) p[u + 1] = p[u] + row[u];
            }
        }
    }

    Algebra operator()(const AxisSegment& s) const {
        if (s.scale != scale_) throw std::invalid_argument("SegmentIntegrator: scale mismatch");
        const Algebra* p = &prefix_[base(s.dir, s.offset & (L_ - 1))];
        const int a = s.start & (L_ - 1);
        const int b = a + s.length;
        if (b <= L_) return p[b] - p[a];
        return (p[L_] - p[a]) + p[b - L_];
    }

private:
    std::size_t base(Dir d, int o) const {
        return (static_cast<std::size_t>(o) * 2 + static_cast<std::size_t>(index(d))) * static_cast<std::size_t>(L_ + 1);
    }

    int scale_;
    int L_;
    std::vector<Algebra> prefix_;
};

struct OrientedSegment {
    AxisSegment segment;
    bool forward = true;
};

inline LatticeCoord segment_point(const AxisSegment& s, int along) {
    return s.dir == Dir::e1 ? LatticeCoord::make(s.scale, s.start + along, s.offset)
                            : LatticeCoord::make(s.scale, s.offset, s.start + along);
}

// Ordered product of exp(+-A(b)) along a connected path of axis segments.
template <LieGroup G>
typename G::Element axis_holonomy(const OneForm<G>& A, const std::vector<OrientedSegment>& path) {
    auto h = G::identity();
    bool have_end = false;
    LatticeCoord end{};
    const int mask = A.size() - 1;
    for (const auto& os : path) {
        const auto& s = os.segment;
        if (s.scale != A.scale()) throw std::invalid_argument("axis_holonomy: scale mismatch");
        const auto from = segment_point(s, os.forward ? 0 : s.length);
        if (have_end && !(from == end)) throw std::invalid_argument("axis_holonomy: path is not connected");
        const auto* row = A.row(s.dir, s.offset);
        if (os.forward) {
            for (int u = 0; u < s.length; ++u) h = G::multiply(h, G::exp(row[(s.start + u) & mask]));
        } else {
            for (int u = s.length - 1; u >= 0; --u) h = G::multiply(h, G::exp(-row[(s.start + u) & mask]));
        }
        end = segment_point(s, os.forward ? s.length : 0);
        have_end = true;
    }
    return h;
}

// ---- random fields (tests and experiments) ---------------------------------

template <LieGroup G, class Rng>
GaugeField<G> random_gauge_field(int scale, Rng& rng) {
    GaugeField<G> U(scale);
    for (auto& v : U.values()) v = G::haar(rng);
    return U;
}

template <LieGroup G, class Rng>
GaugeTransform<G> random_gauge_transform(int scale, Rng& rng) {
    GaugeTransform<G> g(scale);
    for (auto& v : g.values()) v = G::haar(rng);
    return g;
}

template <LieGroup G, class Rng>
OneForm<G> random_one_form(int scale, Rng& rng, double sigma) {
    OneForm<G> A(scale);
    for (auto& v : A.values()) v = random_algebra<G>(rng, sigma);
    return A;
}

} // namespace ymlat
