#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "loewner/conformal_map.hpp"

using namespace loewner;

namespace {

// Central finite differences with one Richardson step; the oracle for the
// exact per-stage jets. Independent of the jet machinery.
struct FdOracle {
    const ConformalMap& map;
    double h;

    Complex d1_raw(const Complex& z, double step) const {
        return (map.apply(z - 2.0 * step) - 8.0 * map.apply(z - step) +
                8.0 * map.apply(z + step) - map.apply(z + 2.0 * step)) /
               (12.0 * step);
    }
    Complex d2_raw(const Complex& z, double step) const {
        return (-map.apply(z - 2.0 * step) + 16.0 * map.apply(z - step) -
                30.0 * map.apply(z) + 16.0 * map.apply(z + step) -
                map.apply(z + 2.0 * step)) /
               (12.0 * step * step);
    }
    Complex d3_raw(const Complex& z, double step) const {
        return (map.apply(z + 2.0 * step) - 2.0 * map.apply(z + step) +
                2.0 * map.apply(z - step) - map.apply(z - 2.0 * step)) /
               (2.0 * step * step * step);
    }
    Complex d1(const Complex& z) const { return d1_raw(z, h); }
    Complex d2(const Complex& z) const { return d2_raw(z, h); }
    Complex d3(const Complex& z) const {
        // d3_raw is second order; one Richardson step lifts it to fourth.
        Complex coarse = d3_raw(z, h), fine = d3_raw(z, 0.5 * h);
        return (4.0 * fine - coarse) / 3.0;
    }
};

} // namespace

TEST_CASE("identity Mobius maps points to themselves") {
    ConformalMap m = ConformalMap::single(Mobius::identity());
    Complex z{1.0, 2.0};
    CHECK(std::abs(m.apply(z) - z) == doctest::Approx(0.0));
}

TEST_CASE("semidisk uniformizer matches closed form at i") {
    ConformalMap m = ConformalMap::single(JoukowskiHull{2.0, 1.0});
    Complex got = m.apply(Complex(0.0, 1.0));
    CHECK(got.real() == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(got.imag() == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("vertical slit closing follows sqrt(z^2 + 4t)") {
    double t = 0.7;
    ConformalMap m = ConformalMap::single(CenteredVerticalSlit{t, 0.0});
    // Above the slit tip: sqrt((iy)^2 + 4t) = i sqrt(y^2 - 4t).
    for (double y : {2.0, 3.5, 10.0}) {
        Complex got = m.apply(Complex(0.0, y));
        CHECK(std::abs(got.real()) < 1e-13);
        CHECK(got.imag() == doctest::Approx(std::sqrt(y * y - 4.0 * t)).epsilon(1e-14));
    }
    // On the real axis, feet land at +- 2 sqrt(t) and the map keeps the sign.
    for (double x : {0.5, 1.0, 4.0}) {
        Complex right = m.apply(Complex(x, 0.0));
        CHECK(right.real() == doctest::Approx(std::sqrt(x * x + 4.0 * t)).epsilon(1e-13));
        Complex left = m.apply(Complex(-x, 0.0));
        CHECK(left.real() == doctest::Approx(-std::sqrt(x * x + 4.0 * t)).epsilon(1e-13));
    }
    // The slit tip maps to the base point (sqrt(eps) accuracy at the branch point).
    CHECK(std::abs(m.apply(Complex(0.0, 2.0 * std::sqrt(t)))) < 1e-7);
    // Opening the slit inverts it: iy -> i sqrt(y^2 + 4t).
    ConformalMap inv = ConformalMap::single(InverseVerticalSlit{t, 0.0});
    for (double y : {1.0, 2.0, 5.0}) {
        Complex got = inv.apply(Complex(0.0, y));
        CHECK(std::abs(got.real()) < 1e-13);
        CHECK(got.imag() == doctest::Approx(std::sqrt(y * y + 4.0 * t)).epsilon(1e-14));
    }
}

TEST_CASE("semidisk first derivative at 0 is 3/4") {
    ConformalMap m = ConformalMap::single(JoukowskiHull{2.0, 1.0});
    auto d = m.derivatives(Complex(0.0, 0.0), 1);
    CHECK(d[0].real() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(d[0].imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("Mobius third derivative matches 6 c^2 det (cz+d)^-4") {
    Mobius mb{Complex(2.0, 1.0), Complex(0.5, 0.0), Complex(0.3, -0.2), Complex(1.0, 0.4)};
    ConformalMap m = ConformalMap::single(mb);
    Complex z{0.4, 0.9};
    Complex den = mb.c * z + mb.d;
    Complex det = mb.a * mb.d - mb.b * mb.c;
    Complex expect = 6.0 * mb.c * mb.c * det / (den * den * den * den);
    auto d = m.derivatives(z, 3);
    CHECK(std::abs(d[2] - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("composed map derivatives match finite differences to 1e-6") {
    ConformalMap m;
    m.append(JoukowskiHull{2.0, 1.0});
    m.append(Mobius{Complex(1.0, 0.0), Complex(0.2, 0.1), Complex(0.05, 0.0), Complex(1.0, 0.0)});
    m.append(CenteredVerticalSlit{0.3, -1.0});

    FdOracle fd{m, 1e-2};
    for (Complex z : {Complex(0.3, 1.2), Complex(-0.8, 2.0), Complex(0.1, 0.9)}) {
        auto d = m.derivatives(z, 3);
        CHECK(std::abs(d[0] - fd.d1(z)) <= 1e-6 * std::abs(d[0]));
        CHECK(std::abs(d[1] - fd.d2(z)) <= 1e-6 * std::abs(d[1]));
        CHECK(std::abs(d[2] - fd.d3(z)) <= 1e-6 * std::abs(d[2]));
    }
}

TEST_CASE("Schwarzian vanishes on Mobius compositions") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        ConformalMap m;
        int stages = 1 + int(rng() % 3);
        for (int s = 0; s < stages; ++s) {
            Mobius mb{Complex(1.0 + u(rng), u(rng)), Complex(u(rng), u(rng)),
                      Complex(0.2 * u(rng), 0.2 * u(rng)), Complex(1.0 + u(rng), u(rng))};
            if (std::abs(mb.a * mb.d - mb.b * mb.c) < 0.1) continue;
            m.append(mb);
        }
        if (m.empty()) continue;
        Complex z{u(rng), 1.0 + std::abs(u(rng))};
        CHECK(std::abs(m.schwarzian(z)) < 1e-12);
    }
}

TEST_CASE("Schwarzian of z^2 at 1 is -3/2") {
    ConformalMap m = ConformalMap::single(Polynomial{{Complex(0.0), Complex(0.0), Complex(1.0)}});
    Complex s = m.schwarzian(Complex(1.0, 0.0));
    CHECK(s.real() == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(std::abs(s.imag()) < 1e-14);
}

TEST_CASE("chain-rule Schwarzian equals direct jet formula") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 50; ++trial) {
        ConformalMap m;
        m.append(JoukowskiHull{2.0 + u(rng), 0.5 + 0.4 * std::abs(u(rng))});
        m.append(CenteredVerticalSlit{0.1 + 0.4 * std::abs(u(rng)), u(rng)});
        Complex z{2.0 * u(rng), 1.0 + std::abs(u(rng))};
        Complex chain, direct;
        try {
            chain = m.schwarzian(z);
            direct = jet_schwarzian(m.jet(z));
        } catch (const Error&) {
            continue;
        }
        ++checked;
        CHECK(std::abs(chain - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
    CHECK(checked >= 30);
}

TEST_CASE("semidisk Schwarzian: chain rule agrees with direct formula at 0") {
    ConformalMap m = ConformalMap::single(JoukowskiHull{2.0, 1.0});
    Complex chain = m.schwarzian(Complex(0.0, 0.0));
    Complex direct = jet_schwarzian(m.jet(Complex(0.0, 0.0)));
    CHECK(std::abs(chain - direct) < 1e-12);
    // psi' = 3/4, psi'' = -1/4, psi''' = -3/8 at 0.
    double expect = (-3.0 / 8.0) / 0.75 - 1.5 * std::pow((-0.25) / 0.75, 2);
    CHECK(chain.real() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("apply followed by inverse is the identity where inverses exist") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<ConformalMap> maps;
    maps.push_back(ConformalMap::single(Mobius{Complex(1.2, 0.1), Complex(0.3, 0.0),
                                               Complex(0.1, 0.0), Complex(1.0, 0.0)}));
    maps.push_back(ConformalMap::single(CenteredVerticalSlit{0.5, 0.7}));
    maps.push_back(ConformalMap::single(InverseVerticalSlit{0.3, -0.4}));
    maps.push_back(ConformalMap::single(JoukowskiHull{2.5, 1.0}));
    ConformalMap chained;
    chained.append(CenteredVerticalSlit{0.2, 0.0});
    chained.append(Mobius::translation(Complex(0.3, 0.0)));
    chained.append(InverseVerticalSlit{0.1, 0.1});
    maps.push_back(chained);

    for (const auto& m : maps) {
        for (int k = 0; k < 20; ++k) {
            // Keep probes clear of slits and hulls (all live below Im = 1.1).
            Complex z{3.0 * u(rng), 1.5 + 1.5 * std::abs(u(rng))};
            Complex back = m.invert_point(m.apply(z));
            CHECK(std::abs(back - z) < 1e-10 * (1.0 + std::abs(z)));
        }
    }
}

TEST_CASE("points at infinity follow the Mobius chart") {
    ConformalMap inv = ConformalMap::single(Mobius{Complex(0.0), Complex(1.0), Complex(1.0), Complex(0.0)});
    ComplexPoint img = inv.apply_point(ComplexPoint::infinity());
    CHECK(!img.at_infinity);
    CHECK(std::abs(img.value) < 1e-15);

    ComplexPoint pole = inv.apply_point(ComplexPoint(0.0, 0.0));
    CHECK(pole.at_infinity);

    ConformalMap slit = ConformalMap::single(CenteredVerticalSlit{1.0, 0.0});
    CHECK(slit.apply_point(ComplexPoint::infinity()).at_infinity);
}

TEST_CASE("derivative at infinity reads off the normalization") {
    ConformalMap m = ConformalMap::single(JoukowskiHull{2.0, 1.0});
    auto d = m.derivative_at_infinity();
    REQUIRE(d.has_value());
    CHECK(std::abs(*d - Complex(1.0, 0.0)) < 1e-15);

    m.append(Mobius::scaling(Complex(2.5, 0.0)));
    d = m.derivative_at_infinity();
    REQUIRE(d.has_value());
    CHECK(std::abs(*d - Complex(2.5, 0.0)) < 1e-15);

    ConformalMap moves = ConformalMap::single(Mobius{Complex(0.0), Complex(1.0), Complex(1.0), Complex(0.0)});
    CHECK(!moves.derivative_at_infinity().has_value());
}

TEST_CASE("hydrodynamic normalization of slit compositions") {
    ConformalMap g;
    double total = 0.0;
    for (int k = 0; k < 40; ++k) {
        double dt = 0.01 + 0.002 * k;
        g.append(CenteredVerticalSlit{dt, 0.05 * k});
        total += dt;
    }
    double R = 1e4;
    Complex probe = g.apply(Complex(0.0, R));
    Complex expect = Complex(0.0, R) + 2.0 * total / Complex(0.0, R);
    CHECK(std::abs(probe - expect) * R < 1e-3 * total);
}
