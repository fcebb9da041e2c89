#include "loewner/loewner_flow.hpp"

#include <cmath>

namespace loewner {

namespace {

// Substep grid over [0, T_limit] refined from the driving samples.
struct StepGrid {
    std::vector<double> t;
    std::vector<double> w;
};

StepGrid make_grid(const DrivingFunction& w, double T, int substeps) {
    if (substeps < 1) throw DomainError("substeps must be >= 1");
    StepGrid g;
    g.t.push_back(0.0);
    g.w.push_back(w.values.front());
    for (std::size_t i = 1; i < w.times.size(); ++i) {
        double t0 = w.times[i - 1], t1 = w.times[i];
        if (t0 >= T) break;
        t1 = std::min(t1, T);
        for (int s = 1; s <= substeps; ++s) {
            double t = t0 + (t1 - t0) * double(s) / double(substeps);
            g.t.push_back(t);
            g.w.push_back(w.at(t));
        }
        if (t1 >= T) break;
    }
    return g;
}

void check_step(double dw, double dt, double limit) {
    if (!(dt > 0.0)) throw DomainError("non-positive capacity step");
    if (std::abs(dw) > limit * std::sqrt(dt))
        throw StepTooLargeError("|dW|/sqrt(dt) = " +
                                std::to_string(std::abs(dw) / std::sqrt(dt)) +
                                " exceeds ratio bound");
}

} // namespace

ForwardResult solve_forward_full(const DrivingFunction& w, const SolverOptions& opts) {
    w.validate();
    StepGrid grid = make_grid(w, w.total_capacity(), opts.substeps);

    ForwardResult res;
    res.trace.points.push_back(Complex(grid.w.front(), 0.0));
    for (std::size_t k = 1; k < grid.t.size(); ++k) {
        double dt = grid.t[k] - grid.t[k - 1];
        double u = grid.w[k];
        check_step(grid.w[k] - grid.w[k - 1], dt, opts.step_ratio_limit);
        res.state.g.append(CenteredVerticalSlit{dt, u});
        Complex tip = res.state.g.invert_point(Complex(u, 0.0));
        if (!is_finite(tip)) throw NonFiniteError("trace point not finite");
        res.trace.points.push_back(tip);
    }
    res.state.capacity = grid.t.back();
    res.state.tip = res.trace.points.back();
    return res;
}

PlanarCurve solve_forward(const DrivingFunction& w, int substeps) {
    SolverOptions opts;
    opts.substeps = substeps;
    return solve_forward_full(w, opts).trace;
}

namespace {

struct ZipperRun {
    std::vector<double> times;  // capacity grid
    std::vector<double> values; // driving samples
    ConformalMap map;           // accumulated flattening composition
};

ZipperRun run_zipper(const PlanarCurve& chord, std::size_t n, const SolverOptions& opts) {
    if (chord.closed) throw DomainError("zipper expects an open chord");
    chord.validate();
    if (opts.check_simple && !chord.is_simple())
        throw NotSimpleError("chord crosses itself");
    const double scale = chord.length();
    if (std::abs(chord.points.front()) > 1e-9 * scale)
        throw DomainError("chord must start at 0");
    PlanarCurve c = opts.resample ? chord.resample(n) : chord;

    ZipperRun run;
    run.times.push_back(0.0);
    run.values.push_back(c.points.front().real());

    std::vector<Complex>& pts = c.points;
    double t = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const Complex p = pts[k];
        const double h = p.imag();
        if (!(h > 0.0)) {
            if (k == 1) continue; // base sample still on R
            throw TipCollisionError("zipper image left the upper half-plane at sample " +
                                    std::to_string(k));
        }
        const double dt = 0.25 * h * h;
        if (dt <= 0.0 || t + dt == t)
            throw TipCollisionError("consecutive zipper images coincide");
        const CenteredVerticalSlit s{dt, p.real()};
        const Stage stage(s);
        for (std::size_t j = k + 1; j < pts.size(); ++j)
            pts[j] = stage_apply(stage, pts[j]);
        run.map.append(s);
        t += dt;
        run.times.push_back(t);
        run.values.push_back(p.real());
    }
    if (run.times.size() < 2) throw DomainError("chord too short to zip");
    return run;
}

} // namespace

DrivingFunction compute_driving(const PlanarCurve& chord, std::size_t n,
                                const SolverOptions& opts) {
    ZipperRun run = run_zipper(chord, n, opts);
    DrivingFunction w;
    w.times = std::move(run.times);
    w.values = std::move(run.values);
    w.validate();
    return w;
}

ConformalMap zipper_map(const PlanarCurve& chord, std::size_t n) {
    return run_zipper(chord, n, SolverOptions{}).map;
}

void flow_hull(const DrivingFunction& w, const HullSpec& hull, double T,
               const HullFlowOptions& opts,
               const std::function<void(double, double, const ConformalMap&)>& visit) {
    w.validate();
    hull.validate();
    if (T > w.total_capacity() + 1e-12)
        throw DomainError("flow horizon exceeds driving capacity span");
    StepGrid grid = make_grid(w, T, opts.substeps);

    std::vector<Complex> arc = hull.boundary_arc(opts.hull_points);
    visit(0.0, grid.w.front(), zip_arc(arc));

    for (std::size_t k = 1; k < grid.t.size(); ++k) {
        const double dt = grid.t[k] - grid.t[k - 1];
        const double u = grid.w[k];
        const Stage stage{CenteredVerticalSlit{dt, u}};
        const double slit_reach = 2.0 * std::sqrt(dt);
        for (auto& p : arc) {
            if (std::abs(p - Complex(u, 0.0)) < 1.5 * slit_reach)
                throw HullHitError("trace reached the hull at t = " +
                                   std::to_string(grid.t[k]));
            p = stage_apply(stage, p);
        }
        visit(grid.t[k], u, zip_arc(arc));
    }
}

DrivingFunction image_driving(const DrivingFunction& w, const HullSpec& hull, double T,
                              const SolverOptions& opts) {
    w.validate();
    hull.validate();
    if (T > w.total_capacity() + 1e-12)
        throw DomainError("horizon exceeds driving capacity span");
    StepGrid grid = make_grid(w, T, opts.substeps);
    const ConformalMap psi = hull.uniformizer();

    ConformalMap g;       // flow of the original trace
    ConformalMap g_image; // flow of the image trace
    DrivingFunction out;
    out.times.push_back(0.0);
    // Base the image driving at the image of the starting point; the final
    // values are re-based so the image chord starts from 0 like the input.
    const double base = psi.apply(Complex(grid.w.front(), 0.0)).real();
    out.values.push_back(base);

    double a = 0.0; // image capacity
    for (std::size_t k = 1; k < grid.t.size(); ++k) {
        const double dt = grid.t[k] - grid.t[k - 1];
        const double u = grid.w[k];
        check_step(grid.w[k] - grid.w[k - 1], dt, opts.step_ratio_limit);
        g.append(CenteredVerticalSlit{dt, u});
        const Complex tip = g.invert_point(Complex(u, 0.0));
        if (hull.distance_to(tip) <= 0.0)
            throw HullHitError("trace entered the hull at t = " + std::to_string(grid.t[k]));
        const Complex image_tip = psi.apply(tip);
        const Complex q = g_image.apply(image_tip);
        if (!(q.imag() > 0.0))
            throw NonFiniteError("image tip left the upper half-plane");
        const double da = 0.25 * q.imag() * q.imag();
        g_image.append(CenteredVerticalSlit{da, q.real()});
        a += da;
        out.times.push_back(a);
        out.values.push_back(q.real());
    }
    for (auto& v : out.values) v -= base;
    out.validate();
    return out;
}

} // namespace loewner
