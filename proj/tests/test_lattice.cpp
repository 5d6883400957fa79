#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "doctest.h"
#include "ymlat/lattice.hpp"

using namespace ymlat;

namespace {

bool contains(const RectangleR& r, const LatticeCoord& plaquette_base) {
    const int di = wrap_coord(plaquette_base.i - r.base.i, r.scale());
    const int dj = wrap_coord(plaquette_base.j - r.base.j, r.scale());
    return di < r.m && dj < r.n;
}

std::set<std::size_t> plaquette_bonds(const RectangleR& p) {
    std::set<std::size_t> s;
    for (const auto& b : boundary_word(p)) s.insert(bond_slot(b.positive_form()));
    return s;
}

int shared_bonds(const RectangleR& p, const RectangleR& q) {
    const auto a = plaquette_bonds(p), b = plaquette_bonds(q);
    int n = 0;
    for (const auto& x : a) n += static_cast<int>(b.count(x));
    return n;
}

// Number of orderings of the plaquettes of r satisfying the chain conditions.
int count_orderings(const RectangleR& r) {
    std::vector<RectangleR> ps;
    const int L = lattice_size(r.scale());
    for (int j = 0; j < L; ++j)
        for (int i = 0; i < L; ++i) {
            const auto x = LatticeCoord::make(r.scale(), i, j);
            if (contains(r, x)) ps.push_back(make_plaquette(x));
        }
    const int k = static_cast<int>(ps.size());
    std::vector<int> used(static_cast<std::size_t>(k), 0);
    int count = 0;
    std::function<void(int, int)> dfs = [&](int last, int depth) {
        if (depth == k) {
            ++count;
            return;
        }
        for (int c = 0; c < k; ++c) {
            if (used[c]) continue;
            if (shared_bonds(ps[last], ps[c]) == 0) continue;
            used[c] = 1;
            dfs(c, depth + 1);
            used[c] = 0;
        }
    };
    for (int f = 0; f < k; ++f) {
        const auto& b = ps[f].base;
        if (contains(r, b.shifted(Dir::e1, -1)) || contains(r, b.shifted(Dir::e2, -1))) continue;
        used[f] = 1;
        dfs(f, 1);
        used[f] = 0;
    }
    return count;
}

} // namespace

TEST_CASE("binary power") {
    CHECK(binary_power(0, 2) == 0);
    CHECK(binary_power(2, 2) == 1);
    CHECK(binary_power(3, 3) == 3);
    CHECK(binary_power(4, 3) == 1);
    CHECK(binary_power(6, 3) == 2);
}

TEST_CASE("plaquette origin") {
    CHECK(origin(make_plaquette(LatticeCoord::make(2, 1, 1))) == LatticeCoord::make(2, 2, 2));
    CHECK(origin(make_plaquette(LatticeCoord::make(1, 0, 0))) == LatticeCoord::make(1, 0, 0));
    // the (x1, x3) plane of the three-dimensional worked case: base (1/4, 1/2)
    // at N = 2 has origin base + e1/4
    CHECK(origin(make_plaquette(LatticeCoord::make(2, 1, 2))) == LatticeCoord::make(2, 2, 2));

    for (int N = 1; N <= 4; ++N) {
        for (const auto& p : all_plaquettes(N)) {
            const auto z = origin(p);
            CHECK(z.i % 2 == 0);
            CHECK(z.j % 2 == 0);
            const int di = wrap_coord(z.i - p.base.i, N), dj = wrap_coord(z.j - p.base.j, N);
            CHECK(di <= 1);
            CHECK(dj <= 1);
        }
    }
}

TEST_CASE("boundary words") {
    const auto p = make_plaquette(LatticeCoord::make(1, 0, 0));
    const auto w = boundary_word(p);
    REQUIRE(w.size() == 4);
    CHECK(w.front().tail() == LatticeCoord::make(1, 0, 0));
    CHECK(w.back().head() == LatticeCoord::make(1, 0, 0));

    const auto r = make_rectangle(LatticeCoord::make(2, 0, 0), 2, 1);
    const auto w2 = boundary_word(r);
    CHECK(w2.size() == 6);
    CHECK(w2.front().tail() == origin(r));

    for (int N = 1; N <= 3; ++N) {
        for (const auto& rr : all_rectangles(N)) {
            const auto word = boundary_word(rr);
            CHECK(word.size() == static_cast<std::size_t>(2 * (rr.m + rr.n)));
            CHECK(word.front().tail() == origin(rr));
            // closed, and anticlockwise: unwrapped signed area equals +m n
            long area2 = 0;
            int x = 0, y = 0;
            for (std::size_t k = 0; k < word.size(); ++k) {
                CHECK(word[k].head() == word[(k + 1) % word.size()].tail());
                const int dx = word[k].dir == Dir::e1 ? word[k].sign : 0;
                const int dy = word[k].dir == Dir::e2 ? word[k].sign : 0;
                area2 += static_cast<long>(x) * (y + dy) - static_cast<long>(x + dx) * y;
                x += dx;
                y += dy;
            }
            CHECK(x == 0);
            CHECK(y == 0);
            CHECK(area2 == 2L * rr.m * rr.n);
        }
    }

    // reversed word of reversed bonds is the clockwise loop
    std::vector<LatticeBond> cw;
    for (auto it = w2.rbegin(); it != w2.rend(); ++it) cw.push_back(it->reversed());
    for (std::size_t k = 0; k + 1 < cw.size(); ++k) CHECK(cw[k].head() == cw[k + 1].tail());
    CHECK(cw.front().tail() == origin(r));
}

TEST_CASE("plaquette chains") {
    const auto p = make_plaquette(LatticeCoord::make(2, 3, 1));
    CHECK(plaquette_chain(p).plaquettes.size() == 1);

    const auto r = make_rectangle(LatticeCoord::make(2, 0, 0), 2, 1);
    const auto c = plaquette_chain(r);
    REQUIRE(c.plaquettes.size() == 2);
    CHECK(c.plaquettes[0].base == LatticeCoord::make(2, 0, 0));
    CHECK(c.plaquettes[1].base == LatticeCoord::make(2, 1, 0));
    CHECK(c.nested.back() == r);

    for (int N = 1; N <= 4; ++N) {
        for (const auto& rr : all_rectangles(N)) {
            const auto ch = plaquette_chain(rr);
            for (std::size_t k = 0; k + 1 < ch.plaquettes.size(); ++k)
                CHECK(shared_bonds(ch.plaquettes[k], ch.plaquettes[k + 1]) == 1);
            if (N <= 3 || rr.base == LatticeCoord::make(N, 5, 11)) CHECK(count_orderings(rr) == 1);
        }
    }
}

TEST_CASE("exhaustive ordering uniqueness at N = 4") {
    for (const auto& rr : all_rectangles(4)) CHECK(count_orderings(rr) == 1);
}

TEST_CASE("refinement levels") {
    for (int N = 1; N <= 4; ++N) {
        const auto l0 = refine_level(N, 0), l1 = refine_level(N, 1), l2 = refine_level(N, 2);
        CHECK(l0.vertices.size() == (1u << (2 * (N - 1))));
        CHECK(l1.vertices.size() == 3u * (1u << (2 * (N - 1))));
        CHECK(l1.vertices.size() - l0.vertices.size() == (1u << (2 * N - 1)));
        CHECK(l2.vertices.size() == (1u << (2 * N)));
        CHECK(l0.bonds.size() == 2u * (1u << (2 * (N - 1))));
        CHECK(l1.bonds.size() == 4u * (1u << (2 * (N - 1))));
        CHECK(l2.bonds.size() == bond_count(N));
    }
    // every new vertex of level 1 is the midpoint of exactly one coarse bond
    const int N = 3;
    const auto l1 = refine_level(N, 1);
    const auto coarse = refine_level(N, 0).bonds;
    for (const auto& x : l1.vertices) {
        if (odd_coordinates(x) != 1) continue;
        int hits = 0;
        for (const auto& b : coarse) {
            const auto lo = LatticeCoord::make(N, 2 * b.base.i, 2 * b.base.j);
            if (lo.shifted(b.dir) == x) ++hits;
        }
        CHECK(hits == 1);
    }
}

TEST_CASE("every bond lies on two plaquettes") {
    for (int N = 1; N <= 3; ++N) {
        std::vector<int> hits(bond_count(N), 0);
        for (const auto& p : all_plaquettes(N))
            for (const auto& b : boundary_word(p)) ++hits[bond_slot(b.positive_form())];
        for (int h : hits) CHECK(h == 2);
        for (int j = 0; j < lattice_size(N); ++j) {
            const LatticeBond b{LatticeCoord::make(N, 1, j), Dir::e2, +1};
            for (const auto& p : plaquettes_containing(b)) {
                const auto w = boundary_word(p);
                CHECK(std::any_of(w.begin(), w.end(),
                                  [&](const LatticeBond& x) { return x.positive_form() == b; }));
            }
        }
    }
}

TEST_CASE("segment enumeration") {
    for (int N = 0; N <= 4; ++N) {
        const int L = lattice_size(N);
        std::set<std::vector<std::size_t>> sets;
        for (Dir d : {Dir::e1, Dir::e2})
            for (int o = 0; o < L; ++o)
                for (int s = 0; s < L; ++s)
                    for (int k = 1; k <= L; ++k) {
                        std::vector<std::size_t> bonds;
                        for (const auto& b : segment_bonds({d, N, o, s, k})) bonds.push_back(bond_slot(b));
                        std::sort(bonds.begin(), bonds.end());
                        sets.insert(bonds);
                    }
        const auto segs = all_segments(N);
        CHECK(sets.size() == segs.size());
        CHECK(segs.size() == static_cast<std::size_t>(2 * L * (L * (L - 1) + 1)));
        CHECK(segment_bonds({Dir::e1, N, 0, 0, 0}).empty());
    }
}
