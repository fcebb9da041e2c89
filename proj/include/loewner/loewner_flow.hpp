#ifndef LOEWNER_LOEWNER_FLOW_HPP
#define LOEWNER_LOEWNER_FLOW_HPP

#include <functional>

#include "loewner/conformal_map.hpp"
#include "loewner/curve.hpp"
#include "loewner/driving.hpp"
#include "loewner/hull.hpp"

namespace loewner {

struct SolverOptions {
    int substeps = 1;              // subdivisions per driving interval
    double step_ratio_limit = 4.0; // max |dW| / sqrt(dt) per step
    bool check_simple = false;     // O(n^2) simplicity test on inputs
    bool resample = true;          // arc-length resample before zipping
};

// Mapping-out state of a forward run: hydrodynamically normalized g_T as a
// composition of per-step slit closings, total capacity, and the trace tip.
struct FlowState {
    ConformalMap g;
    double capacity = 0.0;
    Complex tip{0.0, 0.0};
};

struct ForwardResult {
    PlanarCurve trace; // one point per substep, starting at (W(0), 0)
    FlowState state;
};

// Driving function -> trace. Each substep opens a vertical slit of the
// interval's capacity at the interval's terminal driving value; trace points
// are preimages of the driving value under the accumulated flow.
ForwardResult solve_forward_full(const DrivingFunction& w, const SolverOptions& opts = {});
PlanarCurve solve_forward(const DrivingFunction& w, int substeps = 1);

// Trace -> driving function via the vertical-slit zipper: the chord is
// arc-length resampled to n points, then flattened one sample at a time;
// each step contributes a capacity increment (Im p)^2/4 and driving value Re p.
DrivingFunction compute_driving(const PlanarCurve& chord, std::size_t n,
                                const SolverOptions& opts = {});

// Zipper uniformization of the half-plane minus a chord prefix, exposed for
// callers that need the map rather than the driving samples.
ConformalMap zipper_map(const PlanarCurve& chord, std::size_t n);

struct HullFlowOptions {
    int substeps = 1;
    std::size_t hull_points = 256; // boundary-arc resolution for re-zipping
};

// Transports the hull boundary along the discrete flow of `w` up to capacity
// T and re-uniformizes the flowed hull at every substep. `visit` receives the
// capacity time, the driving value there, and psi_t: H \ K_t -> H as a slit
// composition (hydrodynamically normalized), analytic at the driving point by
// Schwarz reflection since the flowed hull stays at positive distance.
void flow_hull(const DrivingFunction& w, const HullSpec& hull, double T,
               const HullFlowOptions& opts,
               const std::function<void(double t, double w_t, const ConformalMap& psi_t)>& visit);

// Driving function of psi(gamma[0,T]) on its own capacity grid, where psi is
// the hull uniformizer. Advances the trace flow and the image-curve flow one
// zipper step per substep; the image capacity accumulates the image slit
// capacities (equivalently, integrates psi_t'(W_t)^2).
DrivingFunction image_driving(const DrivingFunction& w, const HullSpec& hull, double T,
                              const SolverOptions& opts = {});

} // namespace loewner

#endif
