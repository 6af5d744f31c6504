#pragma once

#include <array>
#include <vector>

#include "spectral_circle/kernels.hpp"

namespace sc {

enum class SegmentKind { TZero, Hypotenuse, DeltaZero };

struct Segment {
    SegmentKind kind = SegmentKind::TZero;
    TrianglePoint a, b;
    // optional feasible triangle the points are clamped into (F < 0: no clamping)
    double F = -1.0;
    double sign = 1.0;
    TrianglePoint at(double u) const;
};

// Feasible set {T >= 0, sign*Delta >= 0, T + |Delta| <= F}, F = min(tau0, 2pi - tau0).
struct Triangle {
    double F = 0.0;
    double sign = 1.0;
    std::array<Segment, 3> borders() const;
    bool contains(const TrianglePoint& p, double slack = 1e-12) const;
};

// Delta signs to explore: {+1} for z > 0, {-1} for z < 0, both for z = 0.
std::vector<Triangle> triangles_for(double tau0, double z);

struct OptimizerOptions {
    int grid_n = 512;          // samples per border segment
    double refine_tol = 1e-10; // golden-section bracket width (segment parameter)
    int grid2d_n = 256;        // interior cross-check grid
    bool cross_check = true;
    Exec exec = Exec::Parallel;
    void validate() const;
};

struct Maximum {
    TrianglePoint at;
    double value = 0.0;
    SegmentKind segment = SegmentKind::TZero;
};

// Grid scan then golden-section refinement around every local grid maximum.
Maximum maximize_on_segment(const Objective& f, const Segment& s, int grid_n, double refine_tol);

struct TriangleSearch {
    Maximum best;             // what the caller should use
    Maximum border;           // best over the three borders
    GridMax interior;         // 2-D grid cross-check (value -inf if skipped)
    bool used_fallback = false;  // interior grid beat the borders beyond tolerance
};

TriangleSearch maximize_triangle(const Objective& f, double tau0, double z, const OptimizerOptions& opt = {});

}  // namespace sc
