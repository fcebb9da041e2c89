#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loewner/energy.hpp"
#include "loewner/loewner_flow.hpp"

using namespace loewner;

namespace {

DrivingFunction uniform_driving(double T, std::size_t n, double (*f)(double)) {
    DrivingFunction w;
    for (std::size_t k = 0; k <= n; ++k) {
        double t = T * double(k) / double(n);
        w.times.push_back(t);
        w.values.push_back(f(t));
    }
    return w;
}

double sup_diff_on_grid(const DrivingFunction& a, const DrivingFunction& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i)
        sup = std::max(sup, std::abs(a.values[i] - b.at(a.times[i])));
    return sup;
}

PlanarCurve vertical_segment(double height, std::size_t n) {
    PlanarCurve c;
    for (std::size_t k = 0; k < n; ++k)
        c.points.push_back(Complex(0.0, height * double(k) / double(n - 1)));
    return c;
}

} // namespace

TEST_CASE("zero driving grows the vertical segment to 2i") {
    DrivingFunction w = uniform_driving(1.0, 1000, [](double) { return 0.0; });
    ForwardResult res = solve_forward_full(w);
    CHECK(std::abs(res.state.tip - Complex(0.0, 2.0)) < 1e-2);
    for (const auto& p : res.trace.points) CHECK(std::abs(p.real()) < 1e-12);
    CHECK(res.state.capacity == doctest::Approx(1.0));

    DrivingFunction quarter = uniform_driving(0.25, 250, [](double) { return 0.0; });
    CHECK(std::abs(solve_forward_full(quarter).state.tip - Complex(0.0, 1.0)) < 1e-2);
}

TEST_CASE("vertical segment zips to zero driving with unit capacity") {
    PlanarCurve seg = vertical_segment(2.0, 500);
    DrivingFunction w = compute_driving(seg, 500);
    CHECK(w.oscillation() < 1e-3);
    for (double v : w.values) CHECK(std::abs(v) < 1e-3);
    CHECK(w.total_capacity() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("hydrodynamic normalization holds at the probe point") {
    DrivingFunction w = uniform_driving(1.0, 400, [](double t) { return 0.8 * std::sin(3.0 * t); });
    ForwardResult res = solve_forward_full(w);
    double T = res.state.capacity;
    double R = 1e4;
    Complex probe = res.state.g.apply(Complex(0.0, R));
    Complex expect = Complex(0.0, R) + 2.0 * T / Complex(0.0, R);
    CHECK(std::abs(probe - expect) * R < 1e-3 * T);
}

TEST_CASE("round trip driving -> trace -> driving shrinks under refinement") {
    DrivingFunction w = uniform_driving(1.0, 1200, [](double t) { return 0.6 * std::sin(2.0 * t) + 0.3 * t; });
    double osc = w.oscillation();

    PlanarCurve trace = solve_forward(w);
    DrivingFunction back_coarse = compute_driving(trace, 600);
    DrivingFunction back_fine = compute_driving(trace, 1200);

    double err_coarse = sup_diff_on_grid(back_coarse, w);
    double err_fine = sup_diff_on_grid(back_fine, w);
    CHECK(err_fine < 5e-2 * osc);
    CHECK(err_fine < err_coarse);
}

TEST_CASE("capacity additivity is exact at grid level") {
    PlanarCurve seg = vertical_segment(2.0, 300);
    DrivingFunction w = compute_driving(seg, 300);
    double sum = 0.0;
    for (std::size_t i = 1; i < w.times.size(); ++i) sum += w.times[i] - w.times[i - 1];
    CHECK(sum == doctest::Approx(w.total_capacity()).epsilon(1e-15));
}

TEST_CASE("scaling covariance of the zipper") {
    // Chord: image of [0,2i] under z -> z/(1 - z/10), a gentle Mobius bend.
    PlanarCurve base = vertical_segment(2.0, 800);
    for (auto& p : base.points) p = p / (1.0 - p / 10.0);
    DrivingFunction w = compute_driving(base, 800);

    for (double lambda : {0.5, 2.0, 5.0}) {
        PlanarCurve scaled = base;
        for (auto& p : scaled.points) p *= lambda;
        DrivingFunction ws = compute_driving(scaled, 800);
        // W_lambda(t) = lambda W(t / lambda^2)
        double sup = 0.0, span = 0.0;
        for (std::size_t i = 0; i < ws.times.size(); ++i) {
            double expect = lambda * w.at(ws.times[i] / (lambda * lambda));
            sup = std::max(sup, std::abs(ws.values[i] - expect));
            span = std::max(span, std::abs(expect));
        }
        CHECK(sup < 0.05 * std::max(span, lambda * w.oscillation()));
    }
}

TEST_CASE("oversized driving jumps are rejected") {
    DrivingFunction w;
    w.times = {0.0, 0.001};
    w.values = {0.0, 1.0};
    CHECK_THROWS_AS(solve_forward(w), StepTooLargeError);
}

TEST_CASE("non-simple chords are rejected when checking is on") {
    PlanarCurve bad;
    // The horizontal run at height 1 cuts back across the initial segment.
    bad.points = {Complex(0, 0), Complex(0, 2), Complex(1, 2), Complex(1, 1),
                  Complex(-1, 1), Complex(-1, 3)};
    SolverOptions opts;
    opts.check_simple = true;
    CHECK_THROWS_AS(compute_driving(bad, 64, opts), NotSimpleError);
}

TEST_CASE("image driving degenerates to the identity for a vanishing hull") {
    DrivingFunction w = uniform_driving(1.0, 300, [](double t) { return 0.4 * std::sin(2.0 * t); });
    HullSpec tiny = HullSpec::semi_disk(2.0, 1e-4);
    DrivingFunction wt = image_driving(w, tiny, 1.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < wt.times.size(); ++i)
        sup = std::max(sup, std::abs(wt.values[i] - w.at(wt.times[i])));
    CHECK(sup < 1e-4);
}

TEST_CASE("image driving initial slope matches -3 psi''(0)") {
    // W = 0: the image driving satisfies dW~/da = -3 psi''/psi'^2 at t = 0.
    DrivingFunction w = uniform_driving(0.5, 4000, [](double) { return 0.0; });
    HullSpec hull = HullSpec::semi_disk(2.0, 1.0);
    DrivingFunction wt = image_driving(w, hull, 0.5);
    CHECK(wt.values.front() == 0.0); // rebased to start at 0
    CHECK(wt.oscillation() > 0.0);   // image driving is genuinely nonzero
    // psi(z) = z + 1/(z-2): psi'(0) = 3/4, psi''(0) = -1/4. The very first
    // sample carries the usual one-step tip lag of slit discretizations, so
    // the slope is read between later samples.
    double expect = -3.0 * (-0.25) / (0.75 * 0.75);
    double slope = (wt.values[5] - wt.values[1]) / (wt.times[5] - wt.times[1]);
    CHECK(slope == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("image driving energy agrees with zipping the mapped trace") {
    DrivingFunction w = uniform_driving(1.0, 1500, [](double t) { return 0.5 * std::sin(2.0 * t); });
    HullSpec hull = HullSpec::semi_disk(3.0, 1.0);

    DrivingFunction wt = image_driving(w, hull, 1.0);
    double e_image = chordal_energy(wt);

    PlanarCurve trace = solve_forward(w);
    ConformalMap psi = hull.uniformizer();
    PlanarCurve mapped;
    for (const auto& p : trace.points) mapped.points.push_back(psi.apply(p));
    Complex base = mapped.points.front();
    for (auto& p : mapped.points) p -= base;
    mapped.points.front() = Complex(0.0, 0.0);
    SolverOptions opts;
    opts.resample = false;
    double e_zip = chordal_energy(compute_driving(mapped, mapped.points.size(), opts));

    CHECK(e_image == doctest::Approx(e_zip).epsilon(0.02));
}

TEST_CASE("flowed hull re-uniformization reproduces the exact map at t = 0") {
    HullSpec hull = HullSpec::semi_disk(2.0, 1.0);
    ConformalMap exact = hull.uniformizer();
    DrivingFunction w = uniform_driving(0.1, 4, [](double) { return 0.0; });

    HullFlowOptions opts;
    opts.hull_points = 512;
    bool first = true;
    flow_hull(w, hull, 0.0, opts, [&](double t, double, const ConformalMap& psi) {
        if (!first) return;
        first = false;
        CHECK(t == 0.0);
        // The exact map and the re-zipped map may differ by a real shift
        // (both hydrodynamic); derivatives and Schwarzian must agree.
        auto de = exact.derivatives(Complex(0.0, 0.0), 2);
        auto dz = psi.derivatives(Complex(0.0, 0.0), 2);
        CHECK(std::abs(de[0] - dz[0]) < 2e-3);
        CHECK(std::abs(de[1] - dz[1]) < 2e-3);
        Complex se = exact.schwarzian(Complex(0.0, 0.0));
        Complex sz = psi.schwarzian(Complex(0.0, 0.0));
        CHECK(std::abs(se - sz) < 5e-3 * std::abs(se));
    });
}
