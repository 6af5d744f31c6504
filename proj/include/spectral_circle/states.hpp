#pragma once

#include <optional>
#include <vector>

#include "spectral_circle/connection.hpp"
#include "spectral_circle/matfun.hpp"

namespace sc {

using Ray = std::vector<cplx>;

// Pure state of C(S^1) (x) M_n: a base point in [0, 2pi) and a unit ray.
// The ray is stored in canonical gauge: first nonzero component real >= 0.
class PureState {
public:
    PureState(double base, Ray ray);

    // n = 2 only: z = |V0|^2 - |V1|^2 and azimuth = arg(2 V0 conj(V1)).
    static PureState from_bloch(double base, double z, double azimuth);

    double base() const { return base_; }
    const Ray& ray() const { return ray_; }
    std::size_t n() const { return ray_.size(); }

private:
    double base_;
    Ray ray_;
};

struct BlochPoint {
    double x = 0, y = 0, z = 0;
    double R = 0;  // sqrt(1 - z^2) = 2 |V0| |V1|
};

BlochPoint to_bloch(const PureState& s);

// Coordinates of zeta relative to xi on the torus T_xi:
// zeta = ( V_j(2k pi + tau0) e^{i phi_j} ), phi[0] = 0, entries wrapped to [0, 2pi).
struct TorusCoords {
    long k = 0;
    double tau0 = 0.0;
    std::vector<double> phi;
};

// exponent Theta_j(b + 2k pi + tau0) - Theta_j(b), computed without
// forming the long argument
double lift_phase(const ConnectionSpec& spec, std::size_t j, double base, long k, double tau0);

// Parallel transport of xi along the base by tau (any real tau).
PureState horizontal_lift(const ConnectionSpec& spec, const PureState& xi, double tau);

// Index of the component used as phase reference: 0, or the first
// component of modulus > tol if the 0th vanishes.
std::size_t reference_index(const Ray& v, double tol);

// nullopt when the moduli of zeta do not match those of xi (not on T_xi).
std::optional<TorusCoords> torus_coords(const ConnectionSpec& spec, const PureState& xi,
                                        const PureState& zeta, long k = 0, double tol = 1e-9);

PureState state_from_coords(const ConnectionSpec& spec, const PureState& xi, const TorusCoords& c);

// phi_j at winding k from phi_j at winding 0
std::vector<double> rewind_phases(const std::vector<double>& phi0, const std::vector<double>& omega, long k);

// min(|d|, 2pi - |d|) after wrapping
double circular_distance(double a, double b);

}  // namespace sc
