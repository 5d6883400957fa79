#include "ymlat/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ymlat {

double RectangleR::area() const {
    return std::ldexp(static_cast<double>(m) * n, -2 * scale());
}

RectangleR make_rectangle(const LatticeCoord& base, int m, int n) {
    const int L = lattice_size(base.scale);
    if (m < 1 || n < 1 || m >= L || n >= L || (m != 1 && n != 1)) {
        throw std::invalid_argument("make_rectangle: need 1 <= m,n < 2^N and m == 1 or n == 1");
    }
    return {LatticeCoord::make(base.scale, base.i, base.j), m, n};
}

RectangleR make_plaquette(const LatticeCoord& base) { return make_rectangle(base, 1, 1); }

double AxisSegment::measure() const { return std::ldexp(static_cast<double>(length), -scale); }

int binary_power(int i, int scale) {
    if (i < 0 || i >= lattice_size(scale)) throw std::invalid_argument("binary_power: i out of range");
    if (i == 0) return 0;
    return scale - std::countr_zero(static_cast<unsigned>(i));
}

int odd_coordinates(const LatticeCoord& x) {
    if (x.scale == 0) return 0;
    return (binary_power(x.i, x.scale) == x.scale ? 1 : 0) + (binary_power(x.j, x.scale) == x.scale ? 1 : 0);
}

LatticeCoord origin(const RectangleR& r) {
    const LatticeCoord& b = r.base;
    const int N = b.scale;
    const LatticeCoord corners[4] = {b, b.shifted(Dir::e1), b.shifted(Dir::e2),
                                     b.shifted(Dir::e1).shifted(Dir::e2)};
    const LatticeCoord* found = nullptr;
    int count = 0;
    for (const auto& c : corners) {
        if (binary_power(c.i, N) <= N - 1 && binary_power(c.j, N) <= N - 1) {
            found = &c;
            ++count;
        }
    }
    if (count != 1) throw std::logic_error("origin: corner not unique");
    return *found;
}

std::vector<LatticeBond> boundary_word(const RectangleR& r) {
    const LatticeCoord& b = r.base;
    std::vector<LatticeBond> w;
    w.reserve(static_cast<std::size_t>(2 * (r.m + r.n)));
    for (int u = 0; u < r.m; ++u) w.push_back({b.shifted(Dir::e1, u), Dir::e1, +1});
    for (int u = 0; u < r.n; ++u) w.push_back({b.shifted(Dir::e1, r.m).shifted(Dir::e2, u), Dir::e2, +1});
    for (int u = 0; u < r.m; ++u) w.push_back({b.shifted(Dir::e1, r.m - u).shifted(Dir::e2, r.n), Dir::e1, -1});
    for (int u = 0; u < r.n; ++u) w.push_back({b.shifted(Dir::e2, r.n - u), Dir::e2, -1});
    const LatticeCoord z = origin(r);
    const auto it = std::find_if(w.begin(), w.end(), [&](const LatticeBond& x) { return x.base == z; });
    if (it == w.end()) throw std::logic_error("boundary_word: origin not on the boundary");
    std::rotate(w.begin(), it, w.end());
    return w;
}

PlaquetteChain plaquette_chain(const RectangleR& r) {
    PlaquetteChain c;
    const int k = r.plaquettes();
    const Dir along = r.n == 1 ? Dir::e1 : Dir::e2;
    for (int t = 0; t < k; ++t) {
        c.plaquettes.push_back(make_plaquette(r.base.shifted(along, t)));
        c.nested.push_back(along == Dir::e1 ? make_rectangle(r.base, t + 1, 1) : make_rectangle(r.base, 1, t + 1));
    }
    return c;
}

RefinementLevel refine_level(int scale, int k) {
    if (scale < 1) throw std::invalid_argument("refine_level: scale must be >= 1");
    if (k < 0 || k > 2) throw std::invalid_argument("refine_level: k must be 0, 1 or 2");
    const int L = lattice_size(scale);
    RefinementLevel out;
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i < L; ++i) {
            const auto x = LatticeCoord::make(scale, i, j);
            if (odd_coordinates(x) <= k) out.vertices.push_back(x);
        }
    }
    if (k == 0) {
        const int Lc = lattice_size(scale - 1);
        for (int j = 0; j < Lc; ++j) {
            for (int i = 0; i < Lc; ++i) {
                for (Dir d : {Dir::e1, Dir::e2}) out.bonds.push_back({LatticeCoord::make(scale - 1, i, j), d, +1});
            }
        }
        return out;
    }
    for (const auto& x : out.vertices) {
        for (Dir d : {Dir::e1, Dir::e2}) {
            if (odd_coordinates(x.shifted(d)) <= k) out.bonds.push_back({x, d, +1});
        }
    }
    return out;
}

std::vector<RectangleR> all_plaquettes(int scale) {
    const int L = lattice_size(scale);
    std::vector<RectangleR> out;
    if (L < 2) return out;
    for (int j = 0; j < L; ++j)
        for (int i = 0; i < L; ++i) out.push_back(make_plaquette(LatticeCoord::make(scale, i, j)));
    return out;
}

std::vector<RectangleR> all_rectangles(int scale) {
    const int L = lattice_size(scale);
    std::vector<RectangleR> out;
    if (L < 2) return out;
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i < L; ++i) {
            const auto b = LatticeCoord::make(scale, i, j);
            out.push_back(make_rectangle(b, 1, 1));
            for (int m = 2; m < L; ++m) out.push_back(make_rectangle(b, m, 1));
            for (int n = 2; n < L; ++n) out.push_back(make_rectangle(b, 1, n));
        }
    }
    return out;
}

std::vector<RectangleR> plaquettes_containing(const LatticeBond& b) {
    const LatticeBond p = b.positive_form();
    const Dir nu = other(p.dir);
    return {make_plaquette(p.base), make_plaquette(p.base.shifted(nu, -1))};
}

std::vector<AxisSegment> all_segments(int scale) {
    const int L = lattice_size(scale);
    std::vector<AxisSegment> out;
    for (Dir d : {Dir::e1, Dir::e2}) {
        for (int o = 0; o < L; ++o) {
            for (int s = 0; s < L; ++s) {
                for (int k = 1; k < L; ++k) out.push_back({d, scale, o, s, k});
            }
            out.push_back({d, scale, o, 0, L});
        }
    }
    return out;
}

std::vector<LatticeBond> segment_bonds(const AxisSegment& s) {
    std::vector<LatticeBond> out;
    out.reserve(static_cast<std::size_t>(s.length));
    for (int u = 0; u < s.length; ++u) {
        const int pos = s.start + u;
        const auto base = s.dir == Dir::e1 ? LatticeCoord::make(s.scale, pos, s.offset)
                                           : LatticeCoord::make(s.scale, s.offset, pos);
        out.push_back({base, s.dir, +1});
    }
    return out;
}

} // namespace ymlat
