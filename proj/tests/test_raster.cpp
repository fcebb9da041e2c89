#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loewner/loop_measure.hpp"
#include "loewner/raster.hpp"
#include "loewner/rng.hpp"

using namespace loewner;

namespace {

double hausdorff(const PlanarCurve& a, const PlanarCurve& b) {
    double h = 0.0;
    for (const auto& p : a.points) h = std::max(h, b.distance_to(p));
    for (const auto& p : b.points) h = std::max(h, a.distance_to(p));
    return h;
}

} // namespace

TEST_CASE("distance field measures cells from marked sources") {
    std::size_t nx = 32, ny = 32;
    std::vector<std::uint8_t> occ(nx * ny, 0);
    occ[16 * nx + 16] = 1;
    auto d = distance_field(occ, nx, ny);
    CHECK(d[16 * nx + 16] == doctest::Approx(0.0));
    CHECK(d[16 * nx + 20] == doctest::Approx(4.0));
    CHECK(d[19 * nx + 20] == doctest::Approx(5.0)); // 3-4-5 triangle
}

TEST_CASE("outer boundary of a polygonal circle stays within two cells") {
    PlanarCurve circle = make_circle(Complex(0.0, 0.0), 1.0, 2048);
    LoopSample loop;
    loop.duration = 1.0;
    loop.basepoint = circle.points.front();
    loop.path = circle.points;
    loop.path.push_back(circle.points.front());

    PlanarCurve boundary = outer_boundary(loop, 256);
    double cell = 2.0 / 256.0;
    CHECK(hausdorff(boundary, circle) < 2.0 * cell + 1e-12);
}

TEST_CASE("figure eight outer boundary outlines both lobes") {
    // Two tangent circles traversed as one path through the pinch point.
    PlanarCurve path;
    std::size_t n = 1600;
    for (std::size_t k = 0; k < n; ++k) {
        double th = 2.0 * kPi * double(k) / double(n);
        path.points.push_back(Complex(-1.0 + std::cos(th), std::sin(th)));
    }
    for (std::size_t k = 0; k < n; ++k) {
        double th = kPi - 2.0 * kPi * double(k) / double(n);
        path.points.push_back(Complex(1.0 + std::cos(th), std::sin(th)));
    }
    LoopSample loop;
    loop.duration = 1.0;
    loop.basepoint = path.points.front();
    loop.path = path.points;
    loop.path.push_back(path.points.front());

    PlanarCurve boundary = outer_boundary(loop, 256);
    // One closed outline enclosing both lobe centers.
    CHECK(boundary.winding_number(Complex(-1.0, 0.0)) != 0);
    CHECK(boundary.winding_number(Complex(1.0, 0.0)) != 0);
    // The pinch point is interior to the outline now.
    CHECK(boundary.winding_number(Complex(0.0, 0.0)) != 0);
    // Extremes of the union are captured.
    double cell = 4.0 / 256.0;
    CHECK(boundary.distance_to(Complex(2.0, 0.0)) < 2.5 * cell);
    CHECK(boundary.distance_to(Complex(-2.0, 0.0)) < 2.5 * cell);
}

TEST_CASE("Brownian loop outer boundary reaches the convex hull extremes") {
    Xoshiro256 rng(2024, 7);
    LoopSample loop = sample_bridge(1.0, Complex(0.0, 0.0), 1 << 17, rng);
    // Split long increments so no segment jumps a 512-grid cell.
    {
        PlanarCurve c;
        c.points = loop.path;
        auto [lo, hi] = c.bounding_box();
        double cell = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / 512.0;
        std::vector<Complex> dense;
        dense.reserve(loop.path.size() * 2);
        for (std::size_t i = 0; i + 1 < loop.path.size(); ++i) {
            const Complex a = loop.path[i], b = loop.path[i + 1];
            dense.push_back(a);
            const std::size_t k = std::size_t(std::abs(b - a) / (0.9 * cell)) + 1;
            for (std::size_t j = 1; j < k; ++j)
                dense.push_back(a + (b - a) * (double(j) / double(k)));
        }
        dense.push_back(loop.path.back());
        loop.path = std::move(dense);
    }
    PlanarCurve boundary = outer_boundary(loop, 512);

    auto [lo, hi] = [&] {
        PlanarCurve c;
        c.points = loop.path;
        return c.bounding_box();
    }();
    double cell = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / 512.0;

    // Axis-extreme path points lie on the hull of the trace, so the outer
    // boundary must pass within a couple of cells of them.
    Complex right = loop.path.front(), left = loop.path.front();
    Complex top = loop.path.front(), bottom = loop.path.front();
    for (const auto& p : loop.path) {
        if (p.real() > right.real()) right = p;
        if (p.real() < left.real()) left = p;
        if (p.imag() > top.imag()) top = p;
        if (p.imag() < bottom.imag()) bottom = p;
    }
    for (const auto& q : {right, left, top, bottom})
        CHECK(boundary.distance_to(q) < 2.0 * cell + 1e-12);
}

TEST_CASE("outer boundary rejects under-resolved paths") {
    LoopSample loop;
    loop.duration = 1.0;
    loop.basepoint = Complex(0, 0);
    loop.path = {Complex(0, 0), Complex(1, 0), Complex(1, 1), Complex(0, 1), Complex(0, 0)};
    CHECK_THROWS_AS(outer_boundary(loop, 64), ResolutionError);
}
