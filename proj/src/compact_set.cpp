#include "loewner/compact_set.hpp"

#include <algorithm>
#include <cmath>

namespace loewner {

namespace {

RasterGrid curve_grid(const PlanarCurve& c, std::size_t resolution, double cell) {
    auto [lo, hi] = c.bounding_box();
    if (cell > 0.0) return RasterGrid::cover_cell(lo, hi, cell, 6.0);
    return RasterGrid::cover(lo, hi, resolution, 6.0);
}

} // namespace

RegionPiece RegionPiece::strip(PlanarCurve curve, std::size_t resolution, double cell) {
    RegionPiece p;
    p.kind_ = Kind::curve_strip;
    p.grid_ = curve_grid(curve, resolution, cell);
    auto occ = rasterize_polyline(curve, p.grid_);
    p.dist_ = distance_field(occ, p.grid_.nx, p.grid_.ny);
    p.boundary_ = std::move(curve);
    return p;
}

RegionPiece RegionPiece::half_disk(Complex center, double radius) {
    RegionPiece p;
    p.kind_ = Kind::half_disk;
    p.center_ = center;
    p.radius_ = radius;
    std::size_t n = 128;
    p.boundary_.points.push_back(center - Complex(radius, 0.0));
    for (std::size_t k = 1; k < n; ++k) {
        double th = kPi * (1.0 - double(k) / double(n));
        p.boundary_.points.push_back(center + radius * Complex(std::cos(th), std::sin(th)));
    }
    p.boundary_.points.push_back(center + Complex(radius, 0.0));
    p.grid_.cell = radius / 128.0; // tolerance scale only
    return p;
}

RegionPiece RegionPiece::inside(PlanarCurve closed_curve, std::size_t resolution, double cell) {
    if (!closed_curve.closed) throw DomainError("inside piece needs a closed curve");
    RegionPiece p;
    p.kind_ = Kind::inside_curve;
    p.grid_ = curve_grid(closed_curve, resolution, cell);
    auto occ = rasterize_polyline(closed_curve, p.grid_);
    auto ext = flood_exterior(occ, p.grid_.nx, p.grid_.ny);
    p.dist_ = distance_field(occ, p.grid_.nx, p.grid_.ny);
    p.inside_.assign(p.grid_.size(), 0);
    for (std::size_t i = 0; i < p.grid_.size(); ++i)
        p.inside_[i] = (!ext[i] && !occ[i]) ? 1 : 0;
    p.boundary_ = std::move(closed_curve);
    return p;
}

RegionPiece RegionPiece::outside(PlanarCurve closed_curve, std::size_t resolution, double cell) {
    RegionPiece p = inside(std::move(closed_curve), resolution, cell);
    p.kind_ = Kind::outside_curve;
    return p;
}

namespace {

// Distance from z to the grid rectangle (0 inside). The rasterized set lies
// at least the cover margin inside the rectangle, so gap + margin is a valid
// lower bound of the true distance; lower bounds keep the sphere-marching
// hit tests correct while staying O(1) far away.
double grid_gap(const RasterGrid& g, const Complex& z) {
    double dx = std::max({g.origin.real() - z.real(),
                          z.real() - (g.origin.real() + double(g.nx) * g.cell), 0.0});
    double dy = std::max({g.origin.imag() - z.imag(),
                          z.imag() - (g.origin.imag() + double(g.ny) * g.cell), 0.0});
    return std::hypot(dx, dy);
}

} // namespace

double RegionPiece::distance(const Complex& z) const {
    switch (kind_) {
        case Kind::half_disk: {
            if (z.imag() >= 0.0) {
                return std::max(0.0, std::abs(z - center_) - radius_);
            }
            // Below the axis: nearest points are the feet.
            double d1 = std::abs(z - (center_ - Complex(radius_, 0)));
            double d2 = std::abs(z - (center_ + Complex(radius_, 0)));
            double dx = std::max(std::abs(z.real() - center_.real()) - radius_, 0.0);
            return std::min({d1, d2, std::hypot(dx, z.imag())});
        }
        case Kind::curve_strip:
        case Kind::inside_curve: {
            if (kind_ == Kind::inside_curve && contains(z)) return 0.0;
            std::size_t ix, iy;
            if (grid_.cell_of(z, ix, iy))
                return double(dist_[grid_.index(ix, iy)]) * grid_.cell;
            return grid_gap(grid_, z) + 4.0 * grid_.cell;
        }
        case Kind::outside_curve: {
            if (contains(z)) return 0.0;
            std::size_t ix, iy;
            if (grid_.cell_of(z, ix, iy))
                return double(dist_[grid_.index(ix, iy)]) * grid_.cell;
            return 0.0; // outside the raster is outside the curve
        }
    }
    return 0.0;
}

bool RegionPiece::contains(const Complex& z) const {
    switch (kind_) {
        case Kind::half_disk:
            return z.imag() >= 0.0 && std::abs(z - center_) <= radius_;
        case Kind::curve_strip: {
            std::size_t ix, iy;
            if (!grid_.cell_of(z, ix, iy)) return false;
            return double(dist_[grid_.index(ix, iy)]) <= 0.75;
        }
        case Kind::inside_curve: {
            std::size_t ix, iy;
            if (!grid_.cell_of(z, ix, iy)) return false;
            std::size_t i = grid_.index(ix, iy);
            return inside_[i] != 0 || dist_[i] <= 0.75;
        }
        case Kind::outside_curve: {
            std::size_t ix, iy;
            if (!grid_.cell_of(z, ix, iy)) return true;
            std::size_t i = grid_.index(ix, iy);
            return inside_[i] == 0 || dist_[i] <= 0.75;
        }
    }
    return false;
}

CompactSet CompactSet::from_curve(const PlanarCurve& c, std::size_t resolution, double cell) {
    CompactSet s("curve");
    s.add(RegionPiece::strip(c, resolution, cell));
    return s;
}

CompactSet CompactSet::from_hull(const HullSpec& h, std::size_t resolution) {
    CompactSet s("hull");
    if (h.kind == HullSpec::Kind::semi_disk) {
        s.add(RegionPiece::half_disk(Complex(h.x0, 0.0), h.r));
    } else {
        s.add(RegionPiece::strip(h.boundary_polyline(256), resolution));
    }
    return s;
}

CompactSet CompactSet::inside_of(const PlanarCurve& closed, std::size_t resolution, double cell) {
    CompactSet s("inside");
    s.add(RegionPiece::inside(closed, resolution, cell));
    return s;
}

CompactSet CompactSet::outside_of(const PlanarCurve& closed, std::size_t resolution,
                                  double cell) {
    CompactSet s("outside");
    s.add(RegionPiece::outside(closed, resolution, cell));
    return s;
}

CompactSet CompactSet::annulus_complement(const ConformalMap& f, double r_in, double r_out,
                                          std::size_t curve_samples, std::size_t resolution,
                                          double cell) {
    if (!(0.0 < r_in && r_in < r_out)) throw DomainError("bad annulus radii");
    CompactSet s("annulus_complement");
    s.add(RegionPiece::inside(map_circle(f, r_in, curve_samples), resolution, cell));
    s.add(RegionPiece::outside(map_circle(f, r_out, curve_samples), resolution, cell));
    return s;
}

double CompactSet::distance(const Complex& z) const {
    double best = 1e300;
    for (const auto& p : pieces_) best = std::min(best, p.distance(z));
    return best;
}

bool CompactSet::hit(const Complex& z, double delta) const {
    for (const auto& p : pieces_)
        if (p.hit(z, delta)) return true;
    return false;
}

bool CompactSet::contains(const Complex& z) const {
    for (const auto& p : pieces_)
        if (p.contains(z)) return true;
    return false;
}

bool CompactSet::unbounded() const {
    for (const auto& p : pieces_)
        if (p.unbounded()) return true;
    return false;
}

std::pair<Complex, Complex> CompactSet::boundary_bbox() const {
    if (pieces_.empty()) throw DomainError("empty compact set");
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const auto& p : pieces_) {
        auto [lo, hi] = p.boundary().bounding_box();
        lo_x = std::min(lo_x, lo.real());
        lo_y = std::min(lo_y, lo.imag());
        hi_x = std::max(hi_x, hi.real());
        hi_y = std::max(hi_y, hi.imag());
    }
    return {Complex(lo_x, lo_y), Complex(hi_x, hi_y)};
}

double CompactSet::max_cell() const {
    double c = 0.0;
    for (const auto& p : pieces_) c = std::max(c, p.cell());
    return c;
}

namespace {

double segment_pair_distance(const Complex& a1, const Complex& a2, const Complex& b1,
                             const Complex& b2) {
    if (segments_intersect(a1, a2, b1, b2)) return 0.0;
    return std::min({segment_distance(a1, a2, b1), segment_distance(a1, a2, b2),
                     segment_distance(b1, b2, a1), segment_distance(b1, b2, a2)});
}

// Exact boundary-to-boundary distance of two pieces, with region membership
// shortcutting to zero. The raster oracles deliberately return lower bounds
// away from their grids, so the set-to-set scale is computed from the
// polylines directly.
double piece_pair_distance(const RegionPiece& a, const RegionPiece& b) {
    if (a.kind() == RegionPiece::Kind::half_disk || b.kind() == RegionPiece::Kind::half_disk) {
        const RegionPiece& disk = a.kind() == RegionPiece::Kind::half_disk ? a : b;
        const RegionPiece& poly = a.kind() == RegionPiece::Kind::half_disk ? b : a;
        double best = 1e300;
        for (const auto& q : disk.boundary().points) {
            if (poly.contains(q)) return 0.0;
            best = std::min(best, poly.boundary().distance_to(q));
        }
        for (const auto& q : poly.boundary().points)
            best = std::min(best, disk.distance(q));
        return best;
    }
    for (const auto& q : b.boundary().points)
        if (a.contains(q)) return 0.0;
    for (const auto& q : a.boundary().points)
        if (b.contains(q)) return 0.0;
    const PlanarCurve& ca = a.boundary();
    const PlanarCurve& cb = b.boundary();
    double best = 1e300;
    for (std::size_t i = 0; i < ca.segment_count(); ++i)
        for (std::size_t j = 0; j < cb.segment_count(); ++j)
            best = std::min(best, segment_pair_distance(ca.segment_start(i), ca.segment_end(i),
                                                        cb.segment_start(j), cb.segment_end(j)));
    return best;
}

} // namespace

double CompactSet::distance_to_set(const CompactSet& other) const {
    double best = 1e300;
    for (const auto& pa : pieces_)
        for (const auto& pb : other.pieces_)
            best = std::min(best, piece_pair_distance(pa, pb));
    return best;
}

DomainSpec DomainSpec::whole_plane() { return DomainSpec{}; }

DomainSpec DomainSpec::upper_half_plane() {
    DomainSpec d;
    d.kind = Kind::half_plane;
    return d;
}

DomainSpec DomainSpec::half_plane_minus(const HullSpec& h) {
    DomainSpec d;
    d.kind = Kind::half_plane_less_hull;
    d.hull = h;
    return d;
}

DomainSpec DomainSpec::plane_minus(CompactSet excluded) {
    DomainSpec d;
    d.kind = Kind::plane_less_set;
    d.excluded = std::make_shared<CompactSet>(std::move(excluded));
    return d;
}

bool DomainSpec::contains(const Complex& z) const {
    switch (kind) {
        case Kind::plane:
            return true;
        case Kind::half_plane:
            return z.imag() > 0.0;
        case Kind::half_plane_less_hull:
            return z.imag() > 0.0 && !hull->contains(z) && hull->distance_to(z) > 0.0;
        case Kind::plane_less_set:
            return !excluded->contains(z);
    }
    return false;
}

std::string DomainSpec::describe() const {
    switch (kind) {
        case Kind::plane: return "C";
        case Kind::half_plane: return "H";
        case Kind::half_plane_less_hull: return "H_minus_hull";
        case Kind::plane_less_set: return "C_minus_set";
    }
    return "?";
}

} // namespace loewner
