#include "spectral_circle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spectral_circle/connection.hpp"

namespace sc {

TrianglePoint Segment::at(double u) const {
    TrianglePoint p{a.T + u * (b.T - a.T), a.Delta + u * (b.Delta - a.Delta)};
    if (F < 0.0) return p;
    p.T = std::clamp(p.T, 0.0, F);
    p.Delta = sign * std::clamp(sign * p.Delta, 0.0, F - p.T);
    return p;
}

std::array<Segment, 3> Triangle::borders() const {
    const TrianglePoint o{0.0, 0.0}, top{0.0, sign * F}, right{F, 0.0};
    return {Segment{SegmentKind::TZero, o, top, F, sign}, Segment{SegmentKind::Hypotenuse, top, right, F, sign},
            Segment{SegmentKind::DeltaZero, o, right, F, sign}};
}

bool Triangle::contains(const TrianglePoint& p, double slack) const {
    return p.T >= -slack && sign * p.Delta >= -slack && p.T + std::abs(p.Delta) <= F + slack;
}

std::vector<Triangle> triangles_for(double tau0, double z) {
    if (!(tau0 >= 0.0 && tau0 < kTwoPi)) throw std::invalid_argument("triangles_for: tau0 outside [0, 2pi)");
    const double F = std::min(tau0, kTwoPi - tau0);
    if (z > 0) return {Triangle{F, 1.0}};
    if (z < 0) return {Triangle{F, -1.0}};
    return {Triangle{F, 1.0}, Triangle{F, -1.0}};
}

void OptimizerOptions::validate() const {
    if (grid_n < 16 || grid_n > 1 << 24) throw std::invalid_argument("optimizer: grid_n must lie in [16, 2^24]");
    if (grid2d_n < 2 || grid2d_n > 1 << 14) throw std::invalid_argument("optimizer: grid2d_n must lie in [2, 2^14]");
    if (!(refine_tol > 0.0 && refine_tol < 0.1)) throw std::invalid_argument("optimizer: refine_tol must lie in (0, 0.1)");
}

namespace {

constexpr double kInvPhi = 0.6180339887498948482;

Maximum golden(const Objective& f, const Segment& s, double lo, double hi, double tol) {
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(s.at(x1)), f2 = f(s.at(x2));
    while (hi - lo > tol) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(s.at(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(s.at(x2));
        }
    }
    const double u = 0.5 * (lo + hi);
    return {s.at(u), f(s.at(u)), s.kind};
}

void consider(Maximum& best, const Maximum& c) {
    if (better_point(c.value, c.at, best.value, best.at)) best = c;
}

}  // namespace

Maximum maximize_on_segment(const Objective& f, const Segment& s, int grid_n, double refine_tol) {
    if (grid_n < 16) throw std::invalid_argument("maximize_on_segment: grid_n must be >= 16");
    std::vector<double> v(grid_n);
    for (int i = 0; i < grid_n; ++i) v[i] = f(s.at(static_cast<double>(i) / (grid_n - 1)));

    Maximum best{s.a, -std::numeric_limits<double>::infinity(), s.kind};
    for (int i = 0; i < grid_n; ++i) {
        const double u = static_cast<double>(i) / (grid_n - 1);
        consider(best, {s.at(u), v[i], s.kind});
        const bool left = (i == 0) || v[i] >= v[i - 1];
        const bool right = (i == grid_n - 1) || v[i] >= v[i + 1];
        if (!(left && right)) continue;
        const double lo = static_cast<double>(std::max(i - 1, 0)) / (grid_n - 1);
        const double hi = static_cast<double>(std::min(i + 1, grid_n - 1)) / (grid_n - 1);
        consider(best, golden(f, s, lo, hi, refine_tol));
    }
    return best;
}

TriangleSearch maximize_triangle(const Objective& f, double tau0, double z, const OptimizerOptions& opt) {
    opt.validate();
    TriangleSearch out;
    out.border.value = -std::numeric_limits<double>::infinity();
    out.interior.value = -std::numeric_limits<double>::infinity();
    for (const auto& tri : triangles_for(tau0, z)) {
        for (const auto& seg : tri.borders()) {
            const Maximum m = maximize_on_segment(f, seg, opt.grid_n, opt.refine_tol);
            if (better_point(m.value, m.at, out.border.value, out.border.at)) out.border = m;
        }
        if (opt.cross_check && tri.F > 0.0) {
            const GridMax g = triangle_grid_max(f, tri.F, tri.sign, opt.grid2d_n, opt.exec);
            if (better_point(g.value, g.at, out.interior.value, out.interior.at)) out.interior = g;
        }
    }
    out.best = out.border;
    // borders should dominate; fall back to the grid point if they clearly do not
    const double slack = 1e-6 * std::max(1.0, std::abs(out.border.value));
    if (out.interior.value > out.border.value + slack) {
        out.used_fallback = true;
        out.best = {out.interior.at, out.interior.value, SegmentKind::TZero};
    }
    return out;
}

}  // namespace sc
