#ifndef LOEWNER_CURVE_HPP
#define LOEWNER_CURVE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "loewner/complex_util.hpp"

namespace loewner {

// Polyline in the complex plane. Closed curves store the first point once;
// closure is implied by the flag.
struct PlanarCurve {
    std::vector<Complex> points;
    bool closed = false;

    std::size_t size() const { return points.size(); }

    // Number of segments, including the closing one for loops.
    std::size_t segment_count() const {
        if (points.size() < 2) return 0;
        return closed ? points.size() : points.size() - 1;
    }

    Complex segment_start(std::size_t i) const { return points[i]; }
    Complex segment_end(std::size_t i) const {
        return points[(i + 1) % points.size()];
    }

    double length() const;

    // Throws if the invariants fail (min size, distinct consecutive points,
    // finite coordinates).
    void validate() const;

    // Full O(n^2) crossing test; intended for test/verify paths only.
    bool is_simple() const;

    // Arc-length resampling to n points. Open curves keep both endpoints;
    // closed curves distribute n points around the loop starting at the
    // current first point.
    PlanarCurve resample(std::size_t n) const;

    // Rotates the starting point of a closed curve to index k.
    PlanarCurve rebase(std::size_t k) const;

    // Winding number around z (closed curves). Integer-valued away from the
    // trace; z on the trace gives an arbitrary nearby value.
    int winding_number(const Complex& z) const;

    double distance_to(const Complex& z) const;

    // Axis-aligned bounding box as (lo, hi) corners.
    std::pair<Complex, Complex> bounding_box() const;
};

double segment_distance(const Complex& a, const Complex& b, const Complex& z);
bool segments_intersect(const Complex& a, const Complex& b, const Complex& c,
                        const Complex& d);

// Text format: one "re,im" per line, '#' comments, optional "closed=true"
// header line. Writers emit 17 significant digits.
PlanarCurve read_curve(std::istream& in);
PlanarCurve read_curve_file(const std::string& path);
void write_curve(std::ostream& out, const PlanarCurve& curve);
void write_curve_file(const std::string& path, const PlanarCurve& curve);

// Sampled circle |z - center| = radius, counterclockwise, n points.
PlanarCurve make_circle(const Complex& center, double radius, std::size_t n);

// Image of the circle r*S^1 under a map applied pointwise.
PlanarCurve map_circle(const class ConformalMap& f, double r, std::size_t n);

} // namespace loewner

#endif
