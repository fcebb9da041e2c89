#ifndef LOEWNER_COMPACT_SET_HPP
#define LOEWNER_COMPACT_SET_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loewner/conformal_map.hpp"
#include "loewner/curve.hpp"
#include "loewner/hull.hpp"
#include "loewner/raster.hpp"

namespace loewner {

// One connected piece of a target set, with raster-backed O(1) hit oracles.
// Hit semantics carry the declared tolerance: a point "hits" the piece iff it
// lies within delta of it, with delta expressed in physical units (callers
// usually pass 2 raster cells).
class RegionPiece {
  public:
    enum class Kind {
        curve_strip,   // the polyline itself, fattened by delta
        half_disk,     // solid semidisk resting on R (hull body)
        inside_curve,  // closed region enclosed by a Jordan polyline
        outside_curve  // closed complement of the open inside (unbounded)
    };

    // cell = 0 derives the cell from the curve extent and `resolution`;
    // passing an explicit cell makes tolerances commensurate across sets.
    static RegionPiece strip(PlanarCurve curve, std::size_t resolution, double cell = 0.0);
    static RegionPiece half_disk(Complex center, double radius);
    static RegionPiece inside(PlanarCurve closed_curve, std::size_t resolution,
                              double cell = 0.0);
    static RegionPiece outside(PlanarCurve closed_curve, std::size_t resolution,
                               double cell = 0.0);

    Kind kind() const { return kind_; }
    bool unbounded() const { return kind_ == Kind::outside_curve; }
    const PlanarCurve& boundary() const { return boundary_; }
    double cell() const { return grid_.cell; }

    // Distance to the piece (0 inside region pieces); clamped from below by
    // raster accuracy, exact for half disks.
    double distance(const Complex& z) const;
    bool hit(const Complex& z, double delta) const { return distance(z) <= delta; }
    // Membership in the closed region (strips: within half a cell).
    bool contains(const Complex& z) const;

  private:
    Kind kind_ = Kind::curve_strip;
    PlanarCurve boundary_;
    Complex center_;
    double radius_ = 0.0;
    RasterGrid grid_;
    std::vector<float> dist_;          // distance to the boundary, cell units
    std::vector<std::uint8_t> inside_; // strict inside mask (region kinds)
};

// A compact target set: union of pieces. Used both as a hit target for loop
// masses and as a domain complement.
class CompactSet {
  public:
    CompactSet() = default;
    explicit CompactSet(std::string name) : name_(std::move(name)) {}

    static CompactSet from_curve(const PlanarCurve& c, std::size_t resolution = 256,
                                 double cell = 0.0);
    static CompactSet from_hull(const HullSpec& h, std::size_t resolution = 256);
    static CompactSet inside_of(const PlanarCurve& closed, std::size_t resolution = 256,
                                double cell = 0.0);
    static CompactSet outside_of(const PlanarCurve& closed, std::size_t resolution = 256,
                                 double cell = 0.0);
    // Complement of f({r_in < |z| < r_out}): the region enclosed by f(r_in S^1)
    // together with the region outside f(r_out S^1).
    static CompactSet annulus_complement(const ConformalMap& f, double r_in, double r_out,
                                         std::size_t curve_samples = 1024,
                                         std::size_t resolution = 256, double cell = 0.0);

    void add(RegionPiece piece) { pieces_.push_back(std::move(piece)); }
    const std::vector<RegionPiece>& pieces() const { return pieces_; }
    const std::string& name() const { return name_; }

    double distance(const Complex& z) const;
    bool hit(const Complex& z, double delta) const;
    bool contains(const Complex& z) const;
    bool unbounded() const;

    // Bounding box of the piece boundaries (not of unbounded regions); the
    // proposal box of the estimators is built from this.
    std::pair<Complex, Complex> boundary_bbox() const;

    // Coarsest raster cell among the pieces; tolerances in "cells" scale by it.
    double max_cell() const;

    double distance_to_set(const CompactSet& other) const;

  private:
    std::vector<RegionPiece> pieces_;
    std::string name_;
};

// Domain of the loop measure.
struct DomainSpec {
    enum class Kind {
        plane,                // whole complex plane
        half_plane,           // upper half-plane H
        half_plane_less_hull, // H minus a hull
        plane_less_set        // C minus a CompactSet (e.g. an annulus image)
    };

    Kind kind = Kind::plane;
    std::optional<HullSpec> hull;
    std::shared_ptr<const CompactSet> excluded;

    static DomainSpec whole_plane();
    static DomainSpec upper_half_plane();
    static DomainSpec half_plane_minus(const HullSpec& h);
    static DomainSpec plane_minus(CompactSet excluded);

    bool is_plane() const { return kind == Kind::plane; }
    bool contains(const Complex& z) const;
    std::string describe() const;
};

} // namespace loewner

#endif
