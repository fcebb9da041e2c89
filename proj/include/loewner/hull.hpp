#ifndef LOEWNER_HULL_HPP
#define LOEWNER_HULL_HPP

#include <vector>

#include "loewner/conformal_map.hpp"
#include "loewner/curve.hpp"

namespace loewner {

// Compact hull K in H at positive distance from 0, together with its exact
// hydrodynamically normalized uniformizer psi: H \ K -> H, psi(z) = z + O(1/z).
struct HullSpec {
    enum class Kind { semi_disk, vertical_slit };

    Kind kind = Kind::semi_disk;
    double x0 = 2.0; // base point on R
    double r = 1.0;  // semidisk radius, or slit height for vertical_slit

    static HullSpec semi_disk(double x0, double r);
    static HullSpec vertical_slit(double x0, double h);

    void validate() const;

    ConformalMap uniformizer() const;

    // Boundary arc of the hull inside H, ordered from the left real foot to
    // the other end (right foot for semidisks, the slit tip for slits),
    // excluding real endpoints. Used to transport the hull along a flow.
    std::vector<Complex> boundary_arc(std::size_t n) const;

    // Boundary polyline for hit tests (includes the real feet).
    PlanarCurve boundary_polyline(std::size_t n) const;

    double distance_to(const Complex& z) const;

    // True if z lies in the closed hull.
    bool contains(const Complex& z) const;
};

// Uniformizer of H minus an arc attached to the real axis, built by zipping
// the arc down with vertical-slit stages at the arc's own resolution. The
// composition is hydrodynamically normalized. `arc` is ordered from the real
// attachment point outward (or foot-to-foot for a crosscut arc); points are
// flattened in order.
ConformalMap zip_arc(const std::vector<Complex>& arc);

} // namespace loewner

#endif
