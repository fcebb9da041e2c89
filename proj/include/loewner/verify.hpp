#ifndef LOEWNER_VERIFY_HPP
#define LOEWNER_VERIFY_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "loewner/energy.hpp"
#include "loewner/loop_measure.hpp"

namespace loewner {

using Json = nlohmann::json;

// Additive error budget: statistical stderr, quadrature refinement delta,
// zipper refinement delta.
struct ErrorBudget {
    double statistical = 0.0;
    double quadrature = 0.0;
    double zipper = 0.0;
    double total() const { return statistical + quadrature + zipper; }
};

struct IdentityReport {
    std::string identity;
    double lhs = 0.0, rhs = 0.0;
    ErrorBudget lhs_err, rhs_err;
    double residual = 0.0;
    double k_sigma = 3.0;
    bool pass = false;
    Json inputs;  // full configuration echo
    Json details; // intermediate quantities, both mass routes, etc.

    void finalize(); // residual and pass from the k-sigma rule
};

Json to_json(const MassEstimate& est);
Json to_json(const EnergyReport& rep);
Json to_json(const IdentityReport& rep);

// Writes report JSON under out_dir and refreshes index.json there. The file
// name is derived from the identity and config hash, so reruns with the same
// configuration overwrite byte-identically.
std::string write_report(const IdentityReport& rep, const std::string& out_dir);

struct VerifyOptions {
    McParams mc;
    double k_sigma = 3.0;
    std::size_t grid_n = 800;       // driving/zipper grid
    std::size_t hull_points = 256;  // flowed-hull re-uniformization
    LoopEnergyOptions loop;
    bool pass_on_monte_carlo = false; // chordal: which B route decides pass
};

// Prop-style finite-horizon chordal restriction:
//   I(psi(Gamma[0,T])) - I(Gamma[0,T])
//     = 3 ln psi'(0) - 3 ln psi_T'(W_T) + 12 B(Gamma[0,T], K; H).
// Both Monte Carlo and Schwarzian routes to B are computed and recorded.
IdentityReport verify_chordal_restriction(const DrivingFunction& w, const HullSpec& hull,
                                          double T, const VerifyOptions& opts);

// Two-domain comparison for hull-complement domains D = H \ K_D,
// D' = H \ K_D' (either hull may be absent):
//   I_{D'} - I_D = 3 ln|psi'(0)| + 12 W(Gamma, D\D'; D) - 12 W(Gamma, D'\D; D').
IdentityReport verify_two_domain(const PlanarCurve& chord,
                                 const std::optional<HullSpec>& hull_d,
                                 const std::optional<HullSpec>& hull_dprime,
                                 const VerifyOptions& opts);

// Loop restriction for Gamma = f(eta) with f conformal on the annular
// neighbourhood A = f_frame({r_in < |z| < r_out}) of eta = f_frame(r=1):
//   I^L(Gamma) - I^L(eta) = 12 W(eta, A^c; C) - 12 W(Gamma, A~^c; C),
// including the neighbourhood-shrink consistency check of the Remark.
IdentityReport verify_loop_restriction(const ConformalMap& f, double r_in, double r_out,
                                       double shrink_r_in, double shrink_r_out,
                                       const VerifyOptions& opts);

// Cut-off renormalization via equipotentials: one exact per-eps identity
//   I^L(Gamma^(1-eps)) = 12 W(S^1, S^(1-eps); C) - 12 W(Gamma, Gamma^(1-eps); C)
// per entry, plus the trend of the rhs toward I^L(Gamma).
std::vector<IdentityReport> verify_cutoff(const ConformalMap& f, const std::vector<double>& eps,
                                          const VerifyOptions& opts);

} // namespace loewner

#endif
