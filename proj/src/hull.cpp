#include "loewner/hull.hpp"

#include <cmath>

namespace loewner {

HullSpec HullSpec::semi_disk(double x0, double r) {
    HullSpec h;
    h.kind = Kind::semi_disk;
    h.x0 = x0;
    h.r = r;
    h.validate();
    return h;
}

HullSpec HullSpec::vertical_slit(double x0, double height) {
    HullSpec h;
    h.kind = Kind::vertical_slit;
    h.x0 = x0;
    h.r = height;
    h.validate();
    return h;
}

void HullSpec::validate() const {
    if (!(r > 0.0)) throw DomainError("hull size must be positive");
    if (kind == Kind::semi_disk && !(r < std::abs(x0)))
        throw DomainError("semidisk hull must be at positive distance from 0");
    if (kind == Kind::vertical_slit && x0 == 0.0)
        throw DomainError("slit hull must be at positive distance from 0");
}

ConformalMap HullSpec::uniformizer() const {
    if (kind == Kind::semi_disk)
        return ConformalMap::single(JoukowskiHull{x0, r});
    // Closing map of the vertical slit [x0, x0 + i r]: capacity r^2/4.
    return ConformalMap::single(CenteredVerticalSlit{0.25 * r * r, x0});
}

std::vector<Complex> HullSpec::boundary_arc(std::size_t n) const {
    std::vector<Complex> arc;
    arc.reserve(n);
    if (kind == Kind::semi_disk) {
        // Semicircle from the left foot to the right foot.
        for (std::size_t k = 1; k < n; ++k) {
            double th = kPi * (1.0 - double(k) / double(n));
            arc.push_back(Complex(x0 + r * std::cos(th), r * std::sin(th)));
        }
    } else {
        // Slit from just above the foot to the tip.
        for (std::size_t k = 1; k <= n; ++k)
            arc.push_back(Complex(x0, r * double(k) / double(n)));
    }
    return arc;
}

PlanarCurve HullSpec::boundary_polyline(std::size_t n) const {
    PlanarCurve c;
    if (kind == Kind::semi_disk) {
        c.points.push_back(Complex(x0 - r, 0.0));
        for (std::size_t k = 1; k < n; ++k) {
            double th = kPi * (1.0 - double(k) / double(n));
            c.points.push_back(Complex(x0 + r * std::cos(th), r * std::sin(th)));
        }
        c.points.push_back(Complex(x0 + r, 0.0));
    } else {
        c.points.push_back(Complex(x0, 0.0));
        for (std::size_t k = 1; k <= n; ++k)
            c.points.push_back(Complex(x0, r * double(k) / double(n)));
    }
    return c;
}

double HullSpec::distance_to(const Complex& z) const {
    if (kind == Kind::semi_disk) {
        // Distance to the closed semidisk (its reflection makes a full disk;
        // for z in the closed upper half-plane they agree).
        double d = std::abs(z - Complex(x0, 0.0)) - r;
        return std::max(d, 0.0);
    }
    return segment_distance(Complex(x0, 0.0), Complex(x0, r), z);
}

bool HullSpec::contains(const Complex& z) const {
    if (z.imag() < 0.0) return false;
    if (kind == Kind::semi_disk) return std::abs(z - Complex(x0, 0.0)) <= r;
    return z.real() == x0 && z.imag() <= r;
}

ConformalMap zip_arc(const std::vector<Complex>& arc) {
    ConformalMap map;
    std::vector<Complex> pts(arc);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Complex p = pts[i];
        const double h = p.imag();
        if (h <= 1e-14 * (1.0 + std::abs(p.real())))
            continue; // already flattened below resolution
        const CenteredVerticalSlit s{0.25 * h * h, p.real()};
        map.append(s);
        const Stage stage(s);
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            pts[j] = stage_apply(stage, pts[j]);
    }
    return map;
}

} // namespace loewner
