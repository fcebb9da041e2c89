#ifndef LOEWNER_LOOP_MEASURE_HPP
#define LOEWNER_LOOP_MEASURE_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "loewner/compact_set.hpp"
#include "loewner/driving.hpp"
#include "loewner/hull.hpp"
#include "loewner/loewner_flow.hpp"
#include "loewner/rng.hpp"

namespace loewner {

// Time-parametrized closed Brownian path (bridge).
struct LoopSample {
    double duration = 0.0;
    Complex basepoint;
    std::vector<Complex> path; // steps+1 points, path.front() == path.back()
    std::size_t steps() const { return path.empty() ? 0 : path.size() - 1; }
};

// Exact-law discrete Brownian bridge: independent Gaussian increments per
// coordinate conditioned to close, variance `diffusivity * t` per coordinate
// per unit time.
LoopSample sample_bridge(double t, const Complex& x, std::size_t m, Xoshiro256& rng,
                         double diffusivity = 1.0);

struct McParams {
    std::size_t n_samples = 200000;
    unsigned streams = 8;              // recorded; results are stream-count invariant
    std::uint64_t seed = 0x10E37ED5EEDULL;
    double t_factor_lo = 1e-4;         // x dist(K1,K2)^2
    double t_factor_hi = 1e4;
    double t_min = 0.0, t_max = 0.0;   // explicit overrides when > 0
    double box_pad_sigmas = 3.5;       // bridge-range pad; leak prob ~ 8 exp(-2 pad^2)
    double delta_hit_cells = 2.0;      // hit tolerance in raster cells
    std::size_t bridge_min_steps = 64;
    std::size_t bridge_max_steps = 4096;
    // Per-coordinate bridge variance per unit time. The restriction-identity
    // cross-check validates this normalization; it is the single switch to
    // flip if the generator convention ever changes.
    double diffusivity = 1.0;
};

struct MassEstimate {
    double mean = 0.0;
    double stderr_val = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_hits = 0;
    std::uint64_t seed = 0;
    unsigned streams = 1;
    double t_lo = 0.0, t_hi = 0.0;
    double tail_bound = 0.0;
    bool tail_decaying = true;
    std::vector<double> shell_means; // dyadic t-shell masses, diagnostics
};

// Seed resolution: explicit argument, else LOEWNER_LAB_SEED, else default.
std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed);

// Importance-sampled integral of (1/(2 pi sigma^2 t^2)) * E[indicator] over
// t in [t_lo, t_lo * 2^ceil(log2(t_hi/t_lo))] (log-uniform within dyadic
// shells, stratified round-robin) and x uniform over `base_box` padded by
// box_pad_sigmas * sqrt(sigma^2 t). `prefilter` may cheaply reject (t, x)
// pairs whose indicator is surely 0 without consuming randomness;
// `step_resolution` sets the bridge step count ceil(t / res^2);
// `gap_distance`, when positive, adds the analytic below-t_lo spanning bound
// to the tail. Exposed so the synthetic analytic target can drive it.
MassEstimate estimate_loop_integral(
    const McParams& p, double t_lo, double t_hi,
    std::pair<Complex, Complex> base_box, double step_resolution,
    const std::function<bool(double, const Complex&)>& prefilter,
    const std::function<bool(double, const Complex&, const std::vector<Complex>&)>& indicator,
    bool need_bridge = true, double gap_distance = 0.0, bool half_plane_box = false);

// Total Brownian-loop mass of loops staying in D and hitting both sets.
MassEstimate brownian_mass(const CompactSet& k1, const CompactSet& k2, const DomainSpec& domain,
                           const McParams& p);

// Same integral with the hit/containment conditions evaluated on the loop's
// outer boundary (Werner's measure as the outer-boundary pushforward).
MassEstimate werner_mass(const CompactSet& k1, const CompactSet& k2, const DomainSpec& domain,
                         const McParams& p);

// Boundary of the unbounded complement component of the loop, rasterized and
// traced as a closed polyline.
PlanarCurve outer_boundary(const LoopSample& loop, std::size_t resolution = 512);

// Coupled difference of two Werner masses: one proposal stream drives both
// indicator pairs, so the difference estimate has far smaller variance than
// independent runs when the configurations overlap. Each indicator is also
// evaluated at half the hit tolerance and the difference is Richardson
// extrapolated in delta: what remains of the delta-inflation bias after the
// common-cell cancellation is first order in delta and would otherwise leak
// into the (small) difference of (large) masses.
struct PairedWernerResult {
    MassEstimate first;            // at the declared tolerance
    MassEstimate second;
    double diff_mean = 0.0;        // extrapolated difference
    double diff_stderr = 0.0;      // statistical error of the extrapolated estimator
    double diff_at_delta = 0.0;    // difference at the declared tolerance
    double diff_at_half_delta = 0.0;
    double delta_sensitivity = 0.0; // |diff(delta) - diff(delta/2)|
    double variance_ratio = 0.0;   // independent-sum variance over coupled variance
};
PairedWernerResult werner_mass_paired(const CompactSet& a1, const CompactSet& a2,
                                      const CompactSet& b1, const CompactSet& b2,
                                      const DomainSpec& domain, const McParams& p);

struct SchwarzianMass {
    double value = 0.0;           // -(1/3) * integral of S psi_t(W_t) dt
    double refinement_delta = 0.0; // |value - value at half grid|
    bool refinement_warning = false;
};

// Deterministic route to B(Gamma[0,T], K; H) along the flow of w, by
// trapezoidal quadrature of the Schwarzian of the flowed-hull uniformizer at
// the driving point.
SchwarzianMass schwarzian_bridge_mass(const DrivingFunction& w, const HullSpec& hull, double T,
                                      const HullFlowOptions& opts = {});

} // namespace loewner

#endif
