#ifndef LOEWNER_ENERGY_HPP
#define LOEWNER_ENERGY_HPP

#include <vector>

#include "loewner/conformal_map.hpp"
#include "loewner/curve.hpp"
#include "loewner/driving.hpp"

namespace loewner {

// Dirichlet energy (1/2) integral of W'(t)^2 dt of the piecewise-linear
// interpolant; exact for the sampled data (the interpolant is the
// minimal-energy extension of the samples).
double chordal_energy(const DrivingFunction& w);

struct ChordEnergyOptions {
    std::size_t n = 2000;     // zipper samples
    double r_cap = 1e6;       // drop image points beyond this radius
    bool check_simple = false;
};

// Energy of a chord in (D, a, b) through a uniformizer phi: (D,a,b) -> (H,0,inf).
double chordal_energy_in_domain(const PlanarCurve& curve, const ConformalMap& phi,
                                const ChordEnergyOptions& opts = {});

struct EnergyReport {
    double value = 0.0;       // nats, >= 0
    std::size_t resolution = 0;
    double eps = 0.0;         // last root cut-off used (loop case)
    bool converged = false;
    double refinement_ratio = 0.0; // |last delta| / |previous delta|
    std::vector<double> per_eps;   // energy at each cut-off, diagnostics
};

struct LoopEnergyOptions {
    std::size_t n = 2000;        // zipper samples per cut-off
    bool hump_correction = true; // zip the opened root arc before driving
    double r_cap = 1e5;          // tail truncation radius in the chord frame
    double converge_rel = 0.05;  // relative agreement declaring convergence
    double zero_floor = 1e-2;    // resolution floor for reporting zero
};

// Rooted loop energy via the shrinking-root-arc limit: for each cut-off the
// complement of the removed arc is uniformized to (H, 0, inf) by a Mobius map
// sending the arc endpoints to 0/inf, a square-root opening, and zipper
// correction stages; the remaining curve is then driven and measured.
// eps values are fractions of total arc length, strictly decreasing.
EnergyReport loop_energy(const PlanarCurve& curve, std::size_t root_index,
                         const std::vector<double>& eps_schedule,
                         const LoopEnergyOptions& opts = {});

std::vector<double> default_eps_schedule();

// Equipotential f((1-eps) S^1) sampled uniformly in angle.
PlanarCurve equipotential(const ConformalMap& f, double eps, std::size_t n = 1024);

struct WpResult {
    double value = 0.0;
    double truncation_bound = 0.0;
    bool diverging = false;
};

// Numerical integral over the unit disk of |f''/f'|^2 dA, tensor quadrature
// with dyadic radial refinement toward |z| = 1. Finiteness diagnostic for the
// Weil-Petersson class; never reported as an energy.
WpResult wp_integral(const ConformalMap& f, std::size_t n = 256);

} // namespace loewner

#endif
