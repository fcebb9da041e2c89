#include "loewner/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace loewner {

void IdentityReport::finalize() {
    residual = lhs - rhs;
    pass = std::abs(residual) <= k_sigma * (lhs_err.total() + rhs_err.total());
}

Json to_json(const MassEstimate& est) {
    return Json{{"mean", est.mean},
                {"stderr", est.stderr_val},
                {"n_samples", est.n_samples},
                {"n_hits", est.n_hits},
                {"seed", est.seed},
                {"streams", est.streams},
                {"t_range", {est.t_lo, est.t_hi}},
                {"tail_bound", est.tail_bound},
                {"tail_decaying", est.tail_decaying}};
}

Json to_json(const EnergyReport& rep) {
    return Json{{"value", rep.value},
                {"resolution", rep.resolution},
                {"eps", rep.eps},
                {"converged", rep.converged},
                {"refinement_ratio", rep.refinement_ratio},
                {"per_eps", rep.per_eps}};
}

namespace {

Json budget_json(const ErrorBudget& b) {
    return Json{{"statistical", b.statistical},
                {"quadrature", b.quadrature},
                {"zipper", b.zipper},
                {"total", b.total()}};
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

Json to_json(const IdentityReport& rep) {
    return Json{{"identity", rep.identity},
                {"lhs", rep.lhs},
                {"rhs", rep.rhs},
                {"lhs_err", budget_json(rep.lhs_err)},
                {"rhs_err", budget_json(rep.rhs_err)},
                {"residual", rep.residual},
                {"k_sigma", rep.k_sigma},
                {"pass", rep.pass},
                {"inputs", rep.inputs},
                {"details", rep.details}};
}

std::string write_report(const IdentityReport& rep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ostringstream tag;
    tag << rep.identity << "_" << std::hex << std::setw(16) << std::setfill('0')
        << fnv1a(rep.inputs.dump());
    const std::string file = tag.str() + ".json";
    {
        std::ofstream out(fs::path(out_dir) / file);
        out << to_json(rep).dump(2) << "\n";
    }

    // Refresh the index: one entry per report file, sorted for determinism.
    const fs::path index_path = fs::path(out_dir) / "index.json";
    Json index = Json::array();
    if (fs::exists(index_path)) {
        std::ifstream in(index_path);
        try {
            in >> index;
        } catch (...) {
            index = Json::array();
        }
    }
    Json entry{{"file", file},
               {"identity", rep.identity},
               {"pass", rep.pass},
               {"lhs", rep.lhs},
               {"rhs", rep.rhs}};
    bool replaced = false;
    for (auto& e : index) {
        if (e.contains("file") && e["file"] == file) {
            e = entry;
            replaced = true;
        }
    }
    if (!replaced) index.push_back(entry);
    std::sort(index.begin(), index.end(),
              [](const Json& a, const Json& b) { return a["file"] < b["file"]; });
    {
        std::ofstream out(index_path);
        out << index.dump(2) << "\n";
    }
    return (fs::path(out_dir) / file).string();
}

// ---------------------------------------------------------------------------
// Chordal restriction.
// ---------------------------------------------------------------------------

IdentityReport verify_chordal_restriction(const DrivingFunction& w, const HullSpec& hull,
                                          double T, const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "chordal_restriction";
    rep.k_sigma = opts.k_sigma;

    DrivingFunction w_run = w.restrict_to(T).resample_uniform(opts.grid_n);

    auto lhs_at = [&](std::size_t n) {
        DrivingFunction wn = w_run.resample_uniform(n);
        DrivingFunction wt = image_driving(wn, hull, T);
        return chordal_energy(wt) - chordal_energy(wn);
    };
    rep.lhs = lhs_at(opts.grid_n);
    rep.lhs_err.zipper = std::abs(rep.lhs - lhs_at(opts.grid_n / 2));

    HullFlowOptions ho;
    ho.hull_points = opts.hull_points;
    SchwarzianMass schw = schwarzian_bridge_mass(w_run, hull, T, ho);

    ConformalMap psi = hull.uniformizer();
    const double psi0 = psi.derivatives(Complex(w_run.values.front(), 0.0), 1)[0].real();
    double psi_T = 1.0;
    flow_hull(w_run, hull, T, ho, [&](double t, double w_t, const ConformalMap& psi_t) {
        if (t == T) psi_T = psi_t.derivatives(Complex(w_t, 0.0), 1)[0].real();
    });
    double psi_T_coarse = 1.0;
    HullFlowOptions ho2 = ho;
    ho2.hull_points = std::max<std::size_t>(32, ho.hull_points / 2);
    flow_hull(w_run, hull, T, ho2, [&](double t, double w_t, const ConformalMap& psi_t) {
        if (t == T) psi_T_coarse = psi_t.derivatives(Complex(w_t, 0.0), 1)[0].real();
    });

    const double log_terms = 3.0 * std::log(std::abs(psi0)) - 3.0 * std::log(std::abs(psi_T));

    // Monte Carlo route to the same mass, over the trace of w up to T.
    PlanarCurve trace = solve_forward(w_run.restrict_to(T));
    CompactSet trace_set = CompactSet::from_curve(trace);
    CompactSet hull_set = CompactSet::from_hull(hull);
    MassEstimate mc = brownian_mass(trace_set, hull_set, DomainSpec::upper_half_plane(), opts.mc);
    // Hit-tolerance sensitivity at half the declared delta.
    McParams mc_half_params = opts.mc;
    mc_half_params.delta_hit_cells *= 0.5;
    MassEstimate mc_half =
        brownian_mass(trace_set, hull_set, DomainSpec::upper_half_plane(), mc_half_params);

    const double rhs_schw = log_terms + 12.0 * schw.value;
    const double rhs_mc = log_terms + 12.0 * mc.mean;

    ErrorBudget schw_err, mc_err;
    schw_err.quadrature = 12.0 * schw.refinement_delta +
                          3.0 * std::abs(std::log(std::abs(psi_T)) -
                                         std::log(std::abs(psi_T_coarse)));
    mc_err.statistical = 12.0 * mc.stderr_val;
    mc_err.quadrature = schw_err.quadrature;

    if (opts.pass_on_monte_carlo) {
        rep.rhs = rhs_mc;
        rep.rhs_err = mc_err;
    } else {
        rep.rhs = rhs_schw;
        rep.rhs_err = schw_err;
    }

    rep.inputs = Json{{"identity", "chordal_restriction"},
                      {"hull", Json{{"kind", hull.kind == HullSpec::Kind::semi_disk
                                                 ? "semi_disk"
                                                 : "vertical_slit"},
                                    {"x0", hull.x0},
                                    {"r", hull.r}}},
                      {"T", T},
                      {"grid_n", opts.grid_n},
                      {"hull_points", opts.hull_points},
                      {"k_sigma", opts.k_sigma},
                      {"pass_route", opts.pass_on_monte_carlo ? "monte_carlo" : "schwarzian"},
                      {"mc", Json{{"n_samples", opts.mc.n_samples},
                                  {"seed", opts.mc.seed},
                                  {"streams", opts.mc.streams},
                                  {"diffusivity", opts.mc.diffusivity}}},
                      {"w_samples", w.size()},
                      {"w_capacity", w.total_capacity()}};
    rep.details = Json{{"schwarzian_mass", schw.value},
                       {"schwarzian_refinement_delta", schw.refinement_delta},
                       {"monte_carlo_mass", to_json(mc)},
                       {"monte_carlo_mass_half_delta", to_json(mc_half)},
                       {"psi_prime_0", psi0},
                       {"psi_prime_T", psi_T},
                       {"log_terms", log_terms},
                       {"rhs_schwarzian", rhs_schw},
                       {"rhs_monte_carlo", rhs_mc}};
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Two-domain comparison.
// ---------------------------------------------------------------------------

namespace {

ConformalMap domain_uniformizer(const std::optional<HullSpec>& hull) {
    if (!hull) return ConformalMap::identity();
    ConformalMap u = hull->uniformizer();
    const Complex at0 = u.apply(Complex(0.0, 0.0));
    u.append(Mobius::translation(-at0));
    return u;
}

Json hull_json(const std::optional<HullSpec>& hull) {
    if (!hull) return Json(nullptr);
    return Json{{"kind", hull->kind == HullSpec::Kind::semi_disk ? "semi_disk" : "vertical_slit"},
                {"x0", hull->x0},
                {"r", hull->r}};
}

} // namespace

IdentityReport verify_two_domain(const PlanarCurve& chord,
                                 const std::optional<HullSpec>& hull_d,
                                 const std::optional<HullSpec>& hull_dprime,
                                 const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "two_domain";
    rep.k_sigma = opts.k_sigma;

    const bool same = (!hull_d && !hull_dprime) ||
                      (hull_d && hull_dprime && hull_d->kind == hull_dprime->kind &&
                       hull_d->x0 == hull_dprime->x0 && hull_d->r == hull_dprime->r);

    ConformalMap phi_d = domain_uniformizer(hull_d);
    ConformalMap phi_dp = domain_uniformizer(hull_dprime);

    ChordEnergyOptions ce;
    ce.n = opts.grid_n;
    auto energy_pair = [&](std::size_t n) {
        ChordEnergyOptions c = ce;
        c.n = n;
        double e_d = chordal_energy_in_domain(chord, phi_d, c);
        double e_dp = chordal_energy_in_domain(chord, phi_dp, c);
        return e_dp - e_d;
    };
    rep.lhs = energy_pair(opts.grid_n);
    rep.lhs_err.zipper = std::abs(rep.lhs - energy_pair(opts.grid_n / 2));

    // psi: D' -> D fixing 0 and infinity; psi'(0) from the exact uniformizers,
    // psi'(inf) = 1 by hydrodynamic normalization.
    const double dp0 = phi_dp.derivatives(Complex(0.0, 0.0), 1)[0].real();
    const double d0 = phi_d.derivatives(Complex(0.0, 0.0), 1)[0].real();
    const double psi_prime_0 = dp0 / d0;
    double rhs = 3.0 * std::log(std::abs(psi_prime_0));

    rep.details = Json{{"psi_prime_0", psi_prime_0}};
    CompactSet chord_set = CompactSet::from_curve(chord);
    if (!same) {
        if (hull_dprime) {
            // D \ D' = K_D' (hulls disjoint from each other and the chord).
            CompactSet removed = CompactSet::from_hull(*hull_dprime);
            DomainSpec dom = hull_d ? DomainSpec::half_plane_minus(*hull_d)
                                    : DomainSpec::upper_half_plane();
            MassEstimate m = werner_mass(chord_set, removed, dom, opts.mc);
            rhs += 12.0 * m.mean;
            rep.rhs_err.statistical += 12.0 * m.stderr_val;
            rep.details["mass_D_minus_Dprime"] = to_json(m);
        }
        if (hull_d) {
            CompactSet removed = CompactSet::from_hull(*hull_d);
            DomainSpec dom = hull_dprime ? DomainSpec::half_plane_minus(*hull_dprime)
                                         : DomainSpec::upper_half_plane();
            MassEstimate m = werner_mass(chord_set, removed, dom, opts.mc);
            rhs -= 12.0 * m.mean;
            rep.rhs_err.statistical += 12.0 * m.stderr_val;
            rep.details["mass_Dprime_minus_D"] = to_json(m);
        }
    }
    rep.rhs = rhs;

    rep.inputs = Json{{"identity", "two_domain"},
                      {"hull_D", hull_json(hull_d)},
                      {"hull_Dprime", hull_json(hull_dprime)},
                      {"grid_n", opts.grid_n},
                      {"k_sigma", opts.k_sigma},
                      {"chord_points", chord.size()},
                      {"mc", Json{{"n_samples", opts.mc.n_samples},
                                  {"seed", opts.mc.seed},
                                  {"streams", opts.mc.streams}}}};
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Loop restriction.
// ---------------------------------------------------------------------------

IdentityReport verify_loop_restriction(const ConformalMap& f, double r_in, double r_out,
                                       double shrink_r_in, double shrink_r_out,
                                       const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "loop_restriction";
    rep.k_sigma = opts.k_sigma;

    const std::size_t curve_n = 2048;
    PlanarCurve eta = make_circle(Complex(0.0, 0.0), 1.0, curve_n);
    PlanarCurve gamma = map_circle(f, 1.0, curve_n);

    EnergyReport e_gamma = loop_energy(gamma, 0, default_eps_schedule(), opts.loop);
    EnergyReport e_eta = loop_energy(eta, 0, default_eps_schedule(), opts.loop);
    rep.lhs = e_gamma.value - e_eta.value;
    auto loop_budget = [&](const EnergyReport& r) {
        double spread = r.per_eps.size() >= 2
                            ? std::abs(r.per_eps.back() - r.per_eps[r.per_eps.size() - 2])
                            : 0.0;
        return std::max(spread, 0.5 * opts.loop.zero_floor);
    };
    rep.lhs_err.zipper = loop_budget(e_gamma) + loop_budget(e_eta);

    // All sets share one raster cell, so every hit tolerance is the same
    // physical width and the delta-inflation bias cancels in the coupled
    // differences instead of entering them with mismatched raster scales.
    const PlanarCurve outer_image = map_circle(f, r_out, curve_n);
    auto [olo, ohi] = outer_image.bounding_box();
    const double cell =
        std::max(ohi.real() - olo.real(), ohi.imag() - olo.imag()) / 256.0;

    CompactSet eta_set = CompactSet::from_curve(eta, 256, cell);
    CompactSet gamma_set = CompactSet::from_curve(gamma, 256, cell);
    CompactSet a_c =
        CompactSet::annulus_complement(ConformalMap::identity(), r_in, r_out, 1024, 256, cell);
    CompactSet a_tilde_c = CompactSet::annulus_complement(f, r_in, r_out, 1024, 256, cell);
    CompactSet b_c = CompactSet::annulus_complement(ConformalMap::identity(), shrink_r_in,
                                                    shrink_r_out, 1024, 256, cell);
    CompactSet b_tilde_c =
        CompactSet::annulus_complement(f, shrink_r_in, shrink_r_out, 1024, 256, cell);

    PairedWernerResult masses = werner_mass_paired(eta_set, a_c, gamma_set, a_tilde_c,
                                                   DomainSpec::whole_plane(), opts.mc);
    rep.rhs = 12.0 * masses.diff_mean;
    rep.rhs_err.statistical = 12.0 * masses.diff_stderr;
    rep.rhs_err.quadrature = 12.0 * masses.delta_sensitivity;

    // Remark consistency: shrinking the neighbourhood must not move the rhs
    // beyond the combined budget.
    PairedWernerResult shrunk = werner_mass_paired(eta_set, b_c, gamma_set, b_tilde_c,
                                                   DomainSpec::whole_plane(), opts.mc);
    const double shrink_change = 12.0 * (shrunk.diff_mean - masses.diff_mean);
    const double shrink_budget =
        opts.k_sigma * 12.0 * (masses.diff_stderr + shrunk.diff_stderr);

    rep.inputs = Json{{"identity", "loop_restriction"},
                      {"r_in", r_in},
                      {"r_out", r_out},
                      {"shrink_r_in", shrink_r_in},
                      {"shrink_r_out", shrink_r_out},
                      {"loop_n", opts.loop.n},
                      {"k_sigma", opts.k_sigma},
                      {"f_stages", f.size()},
                      {"mc", Json{{"n_samples", opts.mc.n_samples},
                                  {"seed", opts.mc.seed},
                                  {"streams", opts.mc.streams}}}};
    rep.details = Json{{"loop_energy_gamma", to_json(e_gamma)},
                       {"loop_energy_eta", to_json(e_eta)},
                       {"mass_eta_Ac", to_json(masses.first)},
                       {"mass_gamma_Atildec", to_json(masses.second)},
                       {"coupled_variance_ratio", masses.variance_ratio},
                       {"diff_at_delta", 12.0 * masses.diff_at_delta},
                       {"diff_at_half_delta", 12.0 * masses.diff_at_half_delta},
                       {"delta_sensitivity", 12.0 * masses.delta_sensitivity},
                       {"shrink_change", shrink_change},
                       {"shrink_budget", shrink_budget},
                       {"shrink_consistent", std::abs(shrink_change) <= shrink_budget}};
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Cut-off renormalization.
// ---------------------------------------------------------------------------

std::vector<IdentityReport> verify_cutoff(const ConformalMap& f, const std::vector<double>& eps,
                                          const VerifyOptions& opts) {
    const std::size_t curve_n = 2048;
    PlanarCurve unit = make_circle(Complex(0.0, 0.0), 1.0, curve_n);
    PlanarCurve gamma = map_circle(f, 1.0, curve_n);
    EnergyReport e_gamma = loop_energy(gamma, 0, default_eps_schedule(), opts.loop);

    // One raster cell across the whole eps series keeps the hit tolerances
    // physically equal and the rhs trend free of differential raster bias.
    auto [glo, ghi] = gamma.bounding_box();
    const double cell = std::max(ghi.real() - glo.real(), ghi.imag() - glo.imag()) / 256.0;
    CompactSet unit_set = CompactSet::from_curve(unit, 256, cell);
    CompactSet gamma_set = CompactSet::from_curve(gamma, 256, cell);

    std::vector<IdentityReport> reports;
    std::vector<double> rhs_series;
    for (double e : eps) {
        IdentityReport rep;
        rep.identity = "cutoff";
        rep.k_sigma = opts.k_sigma;

        PlanarCurve inner_circle = make_circle(Complex(0.0, 0.0), 1.0 - e, curve_n);
        PlanarCurve inner_gamma = equipotential(f, e, curve_n);

        EnergyReport e_inner = loop_energy(inner_gamma, 0, default_eps_schedule(), opts.loop);
        rep.lhs = e_inner.value;
        double spread = e_inner.per_eps.size() >= 2
                            ? std::abs(e_inner.per_eps.back() -
                                       e_inner.per_eps[e_inner.per_eps.size() - 2])
                            : 0.0;
        rep.lhs_err.zipper = std::max(spread, 0.5 * opts.loop.zero_floor);

        PairedWernerResult masses =
            werner_mass_paired(unit_set, CompactSet::from_curve(inner_circle, 256, cell),
                               gamma_set, CompactSet::from_curve(inner_gamma, 256, cell),
                               DomainSpec::whole_plane(), opts.mc);
        rep.rhs = 12.0 * masses.diff_mean;
        rep.rhs_err.statistical = 12.0 * masses.diff_stderr;
        rep.rhs_err.quadrature = 12.0 * masses.delta_sensitivity;
        rhs_series.push_back(rep.rhs);

        rep.inputs = Json{{"identity", "cutoff"},
                          {"eps", e},
                          {"loop_n", opts.loop.n},
                          {"k_sigma", opts.k_sigma},
                          {"f_stages", f.size()},
                          {"mc", Json{{"n_samples", opts.mc.n_samples},
                                      {"seed", opts.mc.seed},
                                      {"streams", opts.mc.streams}}}};
        rep.details = Json{{"loop_energy_equipotential", to_json(e_inner)},
                           {"mass_circles", to_json(masses.first)},
                           {"mass_gamma", to_json(masses.second)},
                           {"coupled_variance_ratio", masses.variance_ratio},
                           {"diff_at_delta", 12.0 * masses.diff_at_delta},
                           {"diff_at_half_delta", 12.0 * masses.diff_at_half_delta},
                           {"delta_sensitivity", 12.0 * masses.delta_sensitivity},
                           {"reference_loop_energy", e_gamma.value}};
        rep.finalize();
        reports.push_back(std::move(rep));
    }

    // Trend of the rhs toward the reference loop energy (advisory only).
    for (std::size_t i = 0; i < reports.size(); ++i) {
        Json trend = Json::array();
        for (double v : rhs_series) trend.push_back(v);
        reports[i].details["rhs_series"] = trend;
        bool monotone = true;
        for (std::size_t j = 1; j < rhs_series.size(); ++j) {
            if (std::abs(rhs_series[j] - e_gamma.value) >
                std::abs(rhs_series[j - 1] - e_gamma.value) + 1e-12)
                monotone = false;
        }
        reports[i].details["rhs_trend_monotone"] = monotone;
    }
    return reports;
}

} // namespace loewner
