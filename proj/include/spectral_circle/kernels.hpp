#pragma once

#include <functional>
#include <vector>

#include "spectral_circle/matfun.hpp"

namespace sc {

// Data-parallel loops come in two flavours: a plain serial loop kept as the
// reference, and an OpenMP one. Both must agree bit for bit (max-reductions
// with a total order only, no parallel sums).
enum class Exec { Serial, Parallel };

struct TrianglePoint {
    double T = 0.0;
    double Delta = 0.0;
};

using Objective = std::function<double(const TrianglePoint&)>;

struct GridMax {
    double value = 0.0;
    TrianglePoint at;
};

// true when (va, a) beats (vb, b): larger value, then smaller T, then smaller |Delta|
bool better_point(double va, const TrianglePoint& a, double vb, const TrianglePoint& b);

// Max of f over the uniform grid T = iF/(G-1), |Delta| = jF/(G-1), i + j <= G-1,
// with Delta carrying `sign`.
GridMax triangle_grid_max(const Objective& f, double F, double sign, int G, Exec exec);

// Central-difference commutator i[D, a] at every grid point:
//   (a(m+1) - a(m-1)) / 2h + i (theta_i - theta_j)(t_m) a_ij(t_m)
// theta[m][j] is theta_j(t_m).
std::vector<CMatrix> commutator_field_kernel(const std::vector<CMatrix>& a,
                                             const std::vector<std::vector<double>>& theta,
                                             double h, Exec exec);

// max_m ||M_m||_op for Hermitian M_m
double sup_hermitian_norm(const std::vector<CMatrix>& field, Exec exec);

// largest |eigenvalue| of a Hermitian matrix (closed form for n <= 2)
double hermitian_op_norm(const CMatrix& m);

}  // namespace sc
