#pragma once

// Dyadic lattice on the 2-torus at scale N: integer coordinates mod 2^N.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ymlat {

enum class Dir : int { e1 = 0, e2 = 1 };

inline Dir other(Dir d) { return d == Dir::e1 ? Dir::e2 : Dir::e1; }
inline int index(Dir d) { return static_cast<int>(d); }

inline int lattice_size(int scale) {
    if (scale < 0 || scale > 20) throw std::invalid_argument("scale out of range");
    return 1 << scale;
}

inline int wrap_coord(int v, int scale) { return v & (lattice_size(scale) - 1); }

struct LatticeCoord {
    int scale = 0;
    int i = 0;
    int j = 0;

    static LatticeCoord make(int scale, int i, int j) {
        return {scale, wrap_coord(i, scale), wrap_coord(j, scale)};
    }
    LatticeCoord shifted(Dir d, int steps = 1) const {
        return d == Dir::e1 ? make(scale, i + steps, j) : make(scale, i, j + steps);
    }
    int coord(Dir d) const { return d == Dir::e1 ? i : j; }
    friend bool operator==(const LatticeCoord&, const LatticeCoord&) = default;
};

// Oriented bond from base to base + sign * e_dir.
struct LatticeBond {
    LatticeCoord base;
    Dir dir = Dir::e1;
    int sign = +1;

    LatticeCoord tail() const { return base; }
    LatticeCoord head() const { return base.shifted(dir, sign); }
    LatticeBond reversed() const { return {head(), dir, -sign}; }
    bool positive() const { return sign > 0; }
    // Same geometric bond with sign +.
    LatticeBond positive_form() const { return positive() ? *this : reversed(); }
    friend bool operator==(const LatticeBond&, const LatticeBond&) = default;
};

// Index into tables over positively oriented bonds, row-major in
// (offset, direction, position): for e1 bonds offset = j, position = i;
// for e2 bonds offset = i, position = j.
inline std::size_t bond_slot(int scale, Dir d, int offset, int position) {
    const std::size_t L = static_cast<std::size_t>(lattice_size(scale));
    return (static_cast<std::size_t>(offset) * 2 + static_cast<std::size_t>(index(d))) * L +
           static_cast<std::size_t>(position);
}

inline std::size_t bond_slot(const LatticeBond& positive_bond) {
    const auto& b = positive_bond.base;
    return positive_bond.dir == Dir::e1 ? bond_slot(b.scale, Dir::e1, b.j, b.i)
                                        : bond_slot(b.scale, Dir::e2, b.i, b.j);
}

inline std::size_t bond_count(int scale) {
    const std::size_t L = static_cast<std::size_t>(lattice_size(scale));
    return 2 * L * L;
}

inline std::size_t site_slot(const LatticeCoord& x) {
    return static_cast<std::size_t>(x.j) * static_cast<std::size_t>(lattice_size(x.scale)) +
           static_cast<std::size_t>(x.i);
}

// r = (base, m 2^{-N} e1, n 2^{-N} e2) with m == 1 or n == 1.
struct RectangleR {
    LatticeCoord base;
    int m = 1;
    int n = 1;

    int scale() const { return base.scale; }
    int plaquettes() const { return m * n; }
    double area() const;
    bool is_plaquette() const { return m == 1 && n == 1; }
    friend bool operator==(const RectangleR&, const RectangleR&) = default;
};

RectangleR make_rectangle(const LatticeCoord& base, int m, int n);
RectangleR make_plaquette(const LatticeCoord& base);

// Union of `length` consecutive bonds in direction dir, starting at
// coordinate `start` along dir, at perpendicular coordinate `offset`.
struct AxisSegment {
    Dir dir = Dir::e1;
    int scale = 0;
    int offset = 0;
    int start = 0;
    int length = 0;

    double measure() const;
    friend bool operator==(const AxisSegment&, const AxisSegment&) = default;
};

// N minus the number of trailing zero bits of i; 0 for i = 0.
int binary_power(int i, int scale);

LatticeCoord origin(const RectangleR& r);

std::vector<LatticeBond> boundary_word(const RectangleR& r);

struct PlaquetteChain {
    std::vector<RectangleR> plaquettes;
    std::vector<RectangleR> nested;
};

PlaquetteChain plaquette_chain(const RectangleR& r);

struct RefinementLevel {
    std::vector<LatticeCoord> vertices;
    std::vector<LatticeBond> bonds; // positively oriented, at scale N
};

// Lambda_N^k and B_N^k. For k = 0 the bonds are those of B_{N-1}
// expressed as coarse bonds at scale N - 1.
RefinementLevel refine_level(int scale, int k);

// Number of coordinates of x whose binary power equals the scale.
int odd_coordinates(const LatticeCoord& x);

std::vector<RectangleR> all_rectangles(int scale);
std::vector<RectangleR> all_plaquettes(int scale);

// The two plaquettes having b as a boundary bond.
std::vector<RectangleR> plaquettes_containing(const LatticeBond& b);

// All segments of X^(N) with length >= 1, one representative per set:
// lengths 1..2^N-1 at every start, and the full wrap once (start 0).
std::vector<AxisSegment> all_segments(int scale);

// Positive bonds covered by a segment, in order from start.
std::vector<LatticeBond> segment_bonds(const AxisSegment& s);

} // namespace ymlat
