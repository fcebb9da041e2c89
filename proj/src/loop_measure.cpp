#include "loewner/loop_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace loewner {

LoopSample sample_bridge(double t, const Complex& x, std::size_t m, Xoshiro256& rng,
                         double diffusivity) {
    if (!(t > 0.0)) throw DomainError("bridge duration must be positive");
    if (m < 8) throw DomainError("bridge needs at least 8 steps");
    LoopSample s;
    s.duration = t;
    s.basepoint = x;
    s.path.resize(m + 1);
    const double sd = std::sqrt(diffusivity * t / double(m));
    // Random walk, then the standard bridge pinning B_k - (k/m) B_m.
    double wx = 0.0, wy = 0.0;
    std::vector<double> xs(m + 1), ys(m + 1);
    xs[0] = ys[0] = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        wx += sd * rng.gaussian();
        wy += sd * rng.gaussian();
        xs[k] = wx;
        ys[k] = wy;
    }
    for (std::size_t k = 0; k <= m; ++k) {
        double f = double(k) / double(m);
        s.path[k] = x + Complex(xs[k] - f * xs[m], ys[k] - f * ys[m]);
    }
    s.path[m] = s.path[0];
    return s;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed) {
    if (explicit_seed) return *explicit_seed;
    if (const char* env = std::getenv("LOEWNER_LAB_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return McParams{}.seed;
}

namespace {

struct ShellStat {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0, hits = 0;

    void add(double w, bool hit) {
        sum += w;
        sum_sq += w * w;
        ++n;
        hits += hit ? 1 : 0;
    }
    double mean() const { return n ? sum / double(n) : 0.0; }
    double var_of_mean() const {
        if (n < 2) return 0.0;
        double m = mean();
        double v = (sum_sq - double(n) * m * m) / double(n - 1);
        return std::max(v, 0.0) / double(n);
    }
};

} // namespace

MassEstimate estimate_loop_integral(
    const McParams& p, double t_lo, double t_hi,
    std::pair<Complex, Complex> base_box, double step_resolution,
    const std::function<bool(double, const Complex&)>& prefilter,
    const std::function<bool(double, const Complex&, const std::vector<Complex>&)>& indicator,
    bool need_bridge, double gap_distance, bool half_plane_box) {
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw DomainError("bad t range");
    const int n_shells = std::max(1, int(std::ceil(std::log2(t_hi / t_lo))));
    const double ln2 = std::log(2.0);
    const double sigma2 = p.diffusivity;

    std::vector<ShellStat> shells(static_cast<std::size_t>(n_shells));
    std::vector<Complex> no_path;

    for (std::size_t i = 0; i < p.n_samples; ++i) {
        const int shell = int(i % std::size_t(n_shells));
        Xoshiro256 rng(p.seed, i);
        const double u = rng.uniform();
        const double t = t_lo * std::pow(2.0, double(shell) + u);

        const double pad = p.box_pad_sigmas * std::sqrt(sigma2 * t);
        const double lo_x = base_box.first.real() - pad;
        const double lo_y = half_plane_box ? std::max(base_box.first.imag() - pad, 0.0)
                                           : base_box.first.imag() - pad;
        const double w_box = (base_box.second.real() + pad) - lo_x;
        const double h_box = (base_box.second.imag() + pad) - lo_y;
        const Complex x = Complex(lo_x + rng.uniform() * w_box, lo_y + rng.uniform() * h_box);

        const double weight =
            w_box * h_box * (t * ln2) / (2.0 * kPi * sigma2 * t * t);

        bool hit = false;
        if (!prefilter || prefilter(t, x)) {
            if (need_bridge) {
                std::size_t m = std::size_t(std::ceil(t / (step_resolution * step_resolution)));
                m = std::clamp(m, p.bridge_min_steps, p.bridge_max_steps);
                LoopSample bridge = sample_bridge(t, x, m, rng, p.diffusivity);
                hit = indicator(t, x, bridge.path);
            } else {
                hit = indicator(t, x, no_path);
            }
        }
        shells[std::size_t(shell)].add(hit ? weight : 0.0, hit);
    }

    MassEstimate est;
    est.seed = p.seed;
    est.streams = p.streams;
    est.t_lo = t_lo;
    est.t_hi = t_lo * std::pow(2.0, double(n_shells));
    est.n_samples = p.n_samples;
    double var = 0.0;
    for (const auto& s : shells) {
        est.mean += s.mean();
        var += s.var_of_mean();
        est.n_hits += s.hits;
        est.shell_means.push_back(s.mean());
    }
    est.stderr_val = std::sqrt(var);

    // Large-t tail: geometric extrapolation of the top dyadic shells. Only
    // meaningful for genuine mass integrals over an unbounded t-range.
    if (gap_distance > 0.0 && shells.size() >= 3) {
        double a = shells[shells.size() - 3].mean();
        double b = shells[shells.size() - 2].mean();
        double c = shells[shells.size() - 1].mean();
        double top = std::max({a, b, c});
        if (top > 0.0) {
            if (c >= b && b >= a && c > 0.0) {
                est.tail_decaying = false;
                est.tail_bound = c;
            } else {
                double ratio = b > 0.0 ? std::clamp(c / b, 0.0, 0.95) : 0.5;
                est.tail_bound = c * ratio / (1.0 - ratio);
            }
        }
    }
    // Small-t tail: bridges of duration < t_lo cannot span the gap between
    // the sets; bound by the Gaussian deviation tail.
    if (gap_distance > 0.0) {
        const double d2 = gap_distance * gap_distance;
        const double pad0 = p.box_pad_sigmas * std::sqrt(sigma2 * t_lo);
        const double w0 = (base_box.second.real() - base_box.first.real()) + 2.0 * pad0;
        const double h0 = (base_box.second.imag() - base_box.first.imag()) + 2.0 * pad0;
        est.tail_bound += w0 * h0 * (16.0 / (kPi * d2)) *
                          std::exp(-d2 / (8.0 * sigma2 * t_lo));
    }
    est.stderr_val += est.tail_bound;
    return est;
}

// ---------------------------------------------------------------------------
// Hit tests along a sampled path.
// ---------------------------------------------------------------------------

namespace {

// Sphere-marching along path segments against a piece's distance oracle.
bool piece_hit_along(const std::vector<Complex>& path, const RegionPiece& piece, double delta) {
    const double floor_step = std::max(0.3 * piece.cell(), 1e-9);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        Complex a = path[i];
        const Complex b = path[i + 1];
        double remaining = std::abs(b - a);
        if (remaining == 0.0) continue;
        const Complex dir = (b - a) / remaining;
        while (true) {
            const double d = piece.distance(a) - delta;
            if (d <= 0.0) return true;
            if (d >= remaining) break;
            const double step = std::max(d, floor_step);
            a += dir * step;
            remaining -= step;
        }
        if (piece.distance(b) <= delta) return true;
    }
    return false;
}

bool set_hit_along(const std::vector<Complex>& path, const CompactSet& set, double delta) {
    for (const auto& piece : set.pieces())
        if (piece_hit_along(path, piece, delta)) return true;
    return false;
}

double path_min_im(const std::vector<Complex>& path) {
    double m = path.empty() ? 0.0 : path.front().imag();
    for (const auto& z : path) m = std::min(m, z.imag());
    return m;
}

bool stays_in_domain(const std::vector<Complex>& path, const DomainSpec& d) {
    switch (d.kind) {
        case DomainSpec::Kind::plane:
            return true;
        case DomainSpec::Kind::half_plane:
            return path_min_im(path) > 0.0;
        case DomainSpec::Kind::half_plane_less_hull: {
            if (path_min_im(path) <= 0.0) return false;
            // March against the hull distance (exact for both hull kinds).
            // Grazing within the floor counts as leaving the domain.
            const HullSpec& h = *d.hull;
            const double floor_step = 1e-4 * h.r;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                Complex a = path[i];
                const Complex b = path[i + 1];
                double remaining = std::abs(b - a);
                if (remaining == 0.0) continue;
                const Complex dir = (b - a) / remaining;
                while (true) {
                    const double dist = h.distance_to(a);
                    if (dist <= floor_step) return false;
                    if (dist >= remaining) break;
                    a += dir * dist;
                    remaining -= dist;
                }
                if (h.distance_to(b) <= floor_step) return false;
            }
            return true;
        }
        case DomainSpec::Kind::plane_less_set:
            return !set_hit_along(path, *d.excluded, 0.0);
    }
    return false;
}

// Lazily built raster fill of a sampled loop: exterior = unbounded complement
// component at raster resolution; everything else (path and pockets) is the
// "fill". Out-of-grid points are exterior.
class LoopFill {
  public:
    explicit LoopFill(const std::vector<Complex>& path, std::size_t resolution = 192) {
        PlanarCurve c;
        c.points = path;
        c.closed = false; // first == last already
        auto [lo, hi] = c.bounding_box();
        grid_ = RasterGrid::cover(lo, hi, resolution, 3.0);
        auto occ = rasterize_polyline(c, grid_);
        ext_ = flood_exterior(occ, grid_.nx, grid_.ny);
    }

    bool exterior_at(const Complex& z) const {
        std::size_t ix, iy;
        if (!grid_.cell_of(z, ix, iy)) return true;
        return ext_[grid_.index(ix, iy)] != 0;
    }

  private:
    RasterGrid grid_;
    std::vector<std::uint8_t> ext_;
};

// Outer-boundary hit of one connected piece: the path must touch the piece
// (the outer boundary lives on the path trace) and the piece must reach the
// closure of the unbounded complement component.
bool piece_outer_hit(const std::vector<Complex>& path, const RegionPiece& piece, double delta,
                     std::optional<LoopFill>& fill) {
    if (!piece_hit_along(path, piece, delta)) return false;
    if (piece.unbounded()) return true;
    if (!fill) fill.emplace(path);
    for (const auto& q : piece.boundary().points)
        if (fill->exterior_at(q)) return true;
    return false;
}

bool set_outer_hit(const std::vector<Complex>& path, const CompactSet& set, double delta,
                   std::optional<LoopFill>& fill) {
    for (const auto& piece : set.pieces())
        if (piece_outer_hit(path, piece, delta, fill)) return true;
    return false;
}

struct Geometry {
    double d = 0.0;        // dist(K1, K2)
    double delta1 = 0.0;   // hit tolerances
    double delta2 = 0.0;
    double step_res = 0.0; // bridge resolution scale
    double t_lo = 0.0, t_hi = 0.0;
    std::pair<Complex, Complex> box;
};

Geometry make_geometry(const CompactSet& k1, const CompactSet& k2, const McParams& p) {
    Geometry g;
    g.d = k1.distance_to_set(k2);
    if (!(g.d > 0.0)) throw DomainError("target sets must be disjoint");
    g.delta1 = p.delta_hit_cells * k1.max_cell();
    g.delta2 = p.delta_hit_cells * k2.max_cell();
    g.step_res = std::min({std::max(g.delta1, 1e-12), std::max(g.delta2, 1e-12), g.d / 32.0});
    g.t_lo = p.t_min > 0.0 ? p.t_min : p.t_factor_lo * g.d * g.d;
    g.t_hi = p.t_max > 0.0 ? p.t_max : p.t_factor_hi * g.d * g.d;
    auto [lo1, hi1] = k1.boundary_bbox();
    auto [lo2, hi2] = k2.boundary_bbox();
    g.box = {Complex(std::min(lo1.real(), lo2.real()), std::min(lo1.imag(), lo2.imag())),
             Complex(std::max(hi1.real(), hi2.real()), std::max(hi1.imag(), hi2.imag()))};
    return g;
}

} // namespace

MassEstimate brownian_mass(const CompactSet& k1, const CompactSet& k2, const DomainSpec& domain,
                           const McParams& p) {
    Geometry g = make_geometry(k1, k2, p);
    const double sigma = std::sqrt(p.diffusivity);

    auto prefilter = [&](double t, const Complex& x) {
        const double reach = p.box_pad_sigmas * sigma * std::sqrt(t);
        return k1.distance(x) <= reach && k2.distance(x) <= reach;
    };
    const bool clamp = domain.kind == DomainSpec::Kind::half_plane ||
                       domain.kind == DomainSpec::Kind::half_plane_less_hull;
    auto indicator = [&](double, const Complex&, const std::vector<Complex>& path) {
        return stays_in_domain(path, domain) && set_hit_along(path, k1, g.delta1) &&
               set_hit_along(path, k2, g.delta2);
    };
    MassEstimate est = estimate_loop_integral(p, g.t_lo, g.t_hi, g.box, g.step_res,
                                              prefilter, indicator, true, g.d, clamp);
    if (est.mean > 0.0 && est.tail_bound > 0.2 * est.mean)
        throw TruncationError("tail bound exceeds 20% of the estimate");
    return est;
}

namespace {

// All conditions a Werner (outer-boundary level) hit must satisfy, evaluated
// against a shared lazily-built fill of the sampled loop.
struct WernerTester {
    const CompactSet* k1;
    const CompactSet* k2;
    double delta1, delta2;
    const DomainSpec* domain;
    const CompactSet* domain_hull_set; // may be null

    bool half_plane() const {
        return domain->kind == DomainSpec::Kind::half_plane ||
               domain->kind == DomainSpec::Kind::half_plane_less_hull;
    }

    bool evaluate_scaled(const std::vector<Complex>& path, std::optional<LoopFill>& fill,
                         double delta_scale) const {
        // The outer boundary attains the fill's extreme points, so staying in
        // H is a plain path test.
        if (half_plane() && path_min_im(path) <= 0.0) return false;
        if (!set_outer_hit(path, *k1, delta_scale * delta1, fill)) return false;
        if (!set_outer_hit(path, *k2, delta_scale * delta2, fill)) return false;
        if (domain_hull_set && set_outer_hit(path, *domain_hull_set, 0.0, fill)) return false;
        if (domain->kind == DomainSpec::Kind::plane_less_set) {
            if (set_outer_hit(path, *domain->excluded, 0.0, fill)) return false;
        }
        return true;
    }

    bool evaluate(const std::vector<Complex>& path, std::optional<LoopFill>& fill) const {
        return evaluate_scaled(path, fill, 1.0);
    }
};

} // namespace

MassEstimate werner_mass(const CompactSet& k1, const CompactSet& k2, const DomainSpec& domain,
                         const McParams& p) {
    Geometry g = make_geometry(k1, k2, p);
    const double sigma = std::sqrt(p.diffusivity);

    std::optional<CompactSet> hull_set;
    if (domain.kind == DomainSpec::Kind::half_plane_less_hull)
        hull_set = CompactSet::from_hull(*domain.hull);
    WernerTester tester{&k1, &k2, g.delta1, g.delta2, &domain,
                        hull_set ? &*hull_set : nullptr};

    auto prefilter = [&](double t, const Complex& x) {
        const double reach = p.box_pad_sigmas * sigma * std::sqrt(t);
        return k1.distance(x) <= reach && k2.distance(x) <= reach;
    };
    auto indicator = [&](double, const Complex&, const std::vector<Complex>& path) {
        std::optional<LoopFill> fill;
        return tester.evaluate(path, fill);
    };
    return estimate_loop_integral(p, g.t_lo, g.t_hi, g.box, g.step_res, prefilter, indicator,
                                  true, g.d, tester.half_plane());
}

PairedWernerResult werner_mass_paired(const CompactSet& a1, const CompactSet& a2,
                                      const CompactSet& b1, const CompactSet& b2,
                                      const DomainSpec& domain, const McParams& p) {
    Geometry ga = make_geometry(a1, a2, p);
    Geometry gb = make_geometry(b1, b2, p);
    const double sigma = std::sqrt(p.diffusivity);

    // One hit tolerance for all four sets: the dominant delta-inflation bias
    // of the masses then cancels in the coupled difference instead of
    // entering it with opposite raster cells.
    const double delta = std::max({ga.delta1, ga.delta2, gb.delta1, gb.delta2});
    ga.delta1 = ga.delta2 = gb.delta1 = gb.delta2 = delta;

    // Union geometry: one proposal stream must cover both supports.
    const double t_lo = std::min(ga.t_lo, gb.t_lo);
    const double t_hi = std::max(ga.t_hi, gb.t_hi);
    const double step_res = std::min(ga.step_res, gb.step_res);
    std::pair<Complex, Complex> box{
        Complex(std::min(ga.box.first.real(), gb.box.first.real()),
                std::min(ga.box.first.imag(), gb.box.first.imag())),
        Complex(std::max(ga.box.second.real(), gb.box.second.real()),
                std::max(ga.box.second.imag(), gb.box.second.imag()))};

    std::optional<CompactSet> hull_set;
    if (domain.kind == DomainSpec::Kind::half_plane_less_hull)
        hull_set = CompactSet::from_hull(*domain.hull);
    WernerTester ta{&a1, &a2, ga.delta1, ga.delta2, &domain, hull_set ? &*hull_set : nullptr};
    WernerTester tb{&b1, &b2, gb.delta1, gb.delta2, &domain, hull_set ? &*hull_set : nullptr};

    const int n_shells = std::max(1, int(std::ceil(std::log2(t_hi / t_lo))));
    const double ln2 = std::log(2.0);
    std::vector<ShellStat> sa(static_cast<std::size_t>(n_shells));
    std::vector<ShellStat> sb(static_cast<std::size_t>(n_shells));
    std::vector<ShellStat> sd(static_cast<std::size_t>(n_shells));      // diff at delta
    std::vector<ShellStat> sd_half(static_cast<std::size_t>(n_shells)); // diff at delta/2
    std::vector<ShellStat> sx(static_cast<std::size_t>(n_shells));      // extrapolated
    const bool clamp = ta.half_plane();

    for (std::size_t i = 0; i < p.n_samples; ++i) {
        const int shell = int(i % std::size_t(n_shells));
        Xoshiro256 rng(p.seed, i);
        const double u = rng.uniform();
        const double t = t_lo * std::pow(2.0, double(shell) + u);

        const double pad = p.box_pad_sigmas * std::sqrt(p.diffusivity * t);
        const double lo_x = box.first.real() - pad;
        const double lo_y = clamp ? std::max(box.first.imag() - pad, 0.0)
                                  : box.first.imag() - pad;
        const double w_box = (box.second.real() + pad) - lo_x;
        const double h_box = (box.second.imag() + pad) - lo_y;
        const Complex x(lo_x + rng.uniform() * w_box, lo_y + rng.uniform() * h_box);
        const double weight = w_box * h_box * (t * ln2) / (2.0 * kPi * p.diffusivity * t * t);

        const double reach = p.box_pad_sigmas * sigma * std::sqrt(t);
        const bool could_a = a1.distance(x) <= reach && a2.distance(x) <= reach;
        const bool could_b = b1.distance(x) <= reach && b2.distance(x) <= reach;
        bool ha = false, hb = false, ha_half = false, hb_half = false;
        if (could_a || could_b) {
            std::size_t m = std::size_t(std::ceil(t / (step_res * step_res)));
            m = std::clamp(m, p.bridge_min_steps, p.bridge_max_steps);
            LoopSample bridge = sample_bridge(t, x, m, rng, p.diffusivity);
            std::optional<LoopFill> fill;
            ha = could_a && ta.evaluate_scaled(bridge.path, fill, 1.0);
            hb = could_b && tb.evaluate_scaled(bridge.path, fill, 1.0);
            // Hits at delta/2 are a subset of hits at delta.
            ha_half = ha && ta.evaluate_scaled(bridge.path, fill, 0.5);
            hb_half = hb && tb.evaluate_scaled(bridge.path, fill, 0.5);
        }
        const double va = ha ? weight : 0.0, vb = hb ? weight : 0.0;
        const double va_h = ha_half ? weight : 0.0, vb_h = hb_half ? weight : 0.0;
        sa[std::size_t(shell)].add(va, ha);
        sb[std::size_t(shell)].add(vb, hb);
        sd[std::size_t(shell)].add(va - vb, ha != hb);
        sd_half[std::size_t(shell)].add(va_h - vb_h, ha_half != hb_half);
        sx[std::size_t(shell)].add(2.0 * (va_h - vb_h) - (va - vb), false);
    }

    auto collect = [&](const std::vector<ShellStat>& shells, MassEstimate& est) {
        est.seed = p.seed;
        est.streams = p.streams;
        est.t_lo = t_lo;
        est.t_hi = t_lo * std::pow(2.0, double(n_shells));
        est.n_samples = p.n_samples;
        double var = 0.0;
        for (const auto& s : shells) {
            est.mean += s.mean();
            var += s.var_of_mean();
            est.n_hits += s.hits;
            est.shell_means.push_back(s.mean());
        }
        est.stderr_val = std::sqrt(var);
    };

    PairedWernerResult out;
    collect(sa, out.first);
    collect(sb, out.second);
    MassEstimate diff, diff_half, extrap;
    collect(sd, diff);
    collect(sd_half, diff_half);
    collect(sx, extrap);
    out.diff_at_delta = diff.mean;
    out.diff_at_half_delta = diff_half.mean;
    out.delta_sensitivity = std::abs(diff.mean - diff_half.mean);
    out.diff_mean = extrap.mean;
    out.diff_stderr = extrap.stderr_val;
    const double indep = out.first.stderr_val * out.first.stderr_val +
                         out.second.stderr_val * out.second.stderr_val;
    out.variance_ratio =
        diff.stderr_val > 0.0 ? indep / (diff.stderr_val * diff.stderr_val) : 0.0;
    return out;
}

PlanarCurve outer_boundary(const LoopSample& loop, std::size_t resolution) {
    if (loop.path.size() < 4) throw DomainError("loop too short");
    PlanarCurve c;
    c.points = loop.path;
    auto [lo, hi] = c.bounding_box();
    RasterGrid grid = RasterGrid::cover(lo, hi, resolution, 4.0);
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
        if (std::abs(c.points[i + 1] - c.points[i]) > grid.cell)
            throw ResolutionError("path segments jump more than one cell");
    auto occ = rasterize_polyline(c, grid);
    auto ext = flood_exterior(occ, grid.nx, grid.ny);
    return trace_outer_boundary(ext, grid);
}

SchwarzianMass schwarzian_bridge_mass(const DrivingFunction& w, const HullSpec& hull, double T,
                                      const HullFlowOptions& opts) {
    auto run = [&](const HullFlowOptions& o) {
        std::vector<double> ts, integrand;
        flow_hull(w, hull, T, o, [&](double t, double w_t, const ConformalMap& psi) {
            Complex s = psi.schwarzian(Complex(w_t, 0.0));
            ts.push_back(t);
            integrand.push_back(s.real());
        });
        double acc = 0.0;
        for (std::size_t i = 1; i < ts.size(); ++i)
            acc += 0.5 * (integrand[i] + integrand[i - 1]) * (ts[i] - ts[i - 1]);
        return -acc / 3.0;
    };

    SchwarzianMass out;
    out.value = run(opts);
    HullFlowOptions coarse = opts;
    if (coarse.substeps > 1) {
        coarse.substeps = std::max(1, opts.substeps / 2);
    } else {
        coarse.hull_points = std::max<std::size_t>(32, opts.hull_points / 2);
    }
    double coarse_value = run(coarse);
    out.refinement_delta = std::abs(out.value - coarse_value);
    out.refinement_warning = out.refinement_delta > 0.01 * std::max(std::abs(out.value), 1e-12);
    return out;
}

} // namespace loewner
