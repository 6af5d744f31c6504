#pragma once

#include <optional>
#include <vector>

#include "spectral_circle/distances.hpp"
#include "spectral_circle/oracle.hpp"

namespace sc {

// Explicit n = 2 element realizing the closed form H(T0, Delta0) up to O(eps):
// piecewise-linear diagonal with slopes (T0 +- Delta0)/tau0 before tau0 and the
// compensating slopes after it, off-diagonal g = g0 + int rho e^{i phi} with
// constant rho and phase on [0, tau0) and (tau0, 2pi), and linear ramps of
// width eps at tau0 and at the wrap point.
class WitnessElement {
public:
    // branch bits: bit 0 adds pi to the phase before tau0, bit 1 after it
    WitnessElement(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c, const TrianglePoint& argmax,
                   double epsilon, int branch);

    // covariant part: diag(f+, f-) with g at (0,1); a(t) = E(t)^* g(t) E(t)
    CMatrix g(double t) const;
    CMatrix a(double t) const;  // t in the frame of xi, [0, 2pi]
    double delta_value() const;
    double pointwise_norm_max() const;  // exact sup of ||i[D, a]||
    DiscretizedElement sample(std::size_t N) const;
    const ConnectionSpec& frame() const { return frame_; }

private:
    struct Piece {
        double u0 = 0, u1 = 0;
        double sT0 = 0, sT1 = 0, sD0 = 0, sD1 = 0;  // diagonal slopes at the ends
        double r0 = 0, r1 = 0, p0 = 0, p1 = 0;      // rho and phase at the ends
        bool ramp = false;
        // cumulative integrals at u0
        double fp = 0, fm = 0;
        cplx gi = 0.0;
    };
    void add_piece(double u0, double u1, const double* left, const double* right, bool ramp);
    const Piece& piece_at(double t) const;
    void partial(const Piece& p, double t, double& fp, double& fm, cplx& gi) const;

    ConnectionSpec frame_;
    Ray V_, W_;
    double y_ = 0;
    std::vector<Piece> pieces_;
    cplx g0_ = 0.0;
};

struct WitnessResult {
    double delta_value = 0.0;
    double comm_norm = 0.0;        // central differences on a fine grid
    double comm_norm_exact = 0.0;  // pointwise formula
    int branch = 0;
};

WitnessResult build_witness(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c,
                            const TrianglePoint& argmax, double epsilon = 1e-3, std::size_t comm_grid = 8192);

// Witness resampled as a covariant ascent seed on an N-grid (n = 2, connected,
// non-integer omega); nullopt otherwise.
std::optional<CovariantElement> witness_seed(const ConnectionSpec& spec, const PureState& xi, const PureState& zeta,
                                             int N, const Tolerances& tol = {});

}  // namespace sc
