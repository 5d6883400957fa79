#include "ymlat/norms.hpp"

#include <cmath>

namespace ymlat {

namespace {

// Arc on a circle of circumference C (integer units): [start, start + length].
struct Arc {
    long start;
    long length;
};

long mod(long v, long c) { return ((v % c) + c) % c; }

long arc_distance(long x, const Arc& J, long C) {
    if (J.length >= C) return 0;
    const long u = mod(x - J.start, C);
    if (u <= J.length) return 0;
    return std::min(u - J.length, C - u);
}

// sup over x in I of the distance from x to J. The distance to J is
// piecewise linear, so the sup sits at an endpoint of I or at the point
// of the gap of J furthest from J.
long directed_sup(const Arc& I, const Arc& J, long C) {
    if (J.length >= C) return 0;
    const long gap = C - J.length;
    if (I.length >= C) return gap / 2;
    long best = std::max(arc_distance(I.start, J, C), arc_distance(I.start + I.length, J, C));
    const long mid = J.start + J.length + gap / 2;
    if (mod(mid - I.start, C) <= I.length) best = std::max(best, gap / 2);
    return best;
}

// Segment as a product of an x-arc and a y-arc, in half-bond units.
std::pair<Arc, Arc> as_product(const AxisSegment& s) {
    const Arc along{2L * s.start, 2L * s.length};
    const Arc across{2L * s.offset, 0};
    return s.dir == Dir::e1 ? std::pair{along, across} : std::pair{across, along};
}

} // namespace

double hausdorff_distance(const AxisSegment& a, const AxisSegment& b) {
    if (a.scale != b.scale) throw std::invalid_argument("hausdorff_distance: scale mismatch");
    const long C = 2L * lattice_size(a.scale);
    const auto [ax, ay] = as_product(a);
    const auto [bx, by] = as_product(b);
    // the torus metric is separable over product sets
    const auto directed = [C](const Arc& px, const Arc& py, const Arc& qx, const Arc& qy) {
        const double dx = static_cast<double>(directed_sup(px, qx, C));
        const double dy = static_cast<double>(directed_sup(py, qy, C));
        return dx * dx + dy * dy;
    };
    const double d2 = std::max(directed(ax, ay, bx, by), directed(bx, by, ax, ay));
    return std::sqrt(d2) / static_cast<double>(C);
}

} // namespace ymlat
