#ifndef LOEWNER_RASTER_HPP
#define LOEWNER_RASTER_HPP

#include <cstdint>
#include <vector>

#include "loewner/curve.hpp"

namespace loewner {

// Uniform cell grid over a rectangle; raster oracles for hit tests and
// outer-boundary extraction live on top of it.
struct RasterGrid {
    Complex origin;      // lower-left corner
    double cell = 1.0;
    std::size_t nx = 0, ny = 0;

    static RasterGrid cover(const Complex& lo, const Complex& hi, std::size_t resolution,
                            double margin_cells = 4.0);
    // Same cover with an explicit cell size (commensurate grids across sets).
    static RasterGrid cover_cell(const Complex& lo, const Complex& hi, double cell,
                                 double margin_cells = 4.0);

    std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
    Complex center(std::size_t ix, std::size_t iy) const {
        return origin + Complex((double(ix) + 0.5) * cell, (double(iy) + 0.5) * cell);
    }
    bool cell_of(const Complex& z, std::size_t& ix, std::size_t& iy) const;
    std::size_t size() const { return nx * ny; }
};

// Marks every cell a polyline passes through (supercover traversal, so the
// marked cells form a 4-connected wall along each segment).
std::vector<std::uint8_t> rasterize_polyline(const PlanarCurve& path, const RasterGrid& grid);

// Exact Euclidean distance transform, in cell units, to the marked cells.
std::vector<float> distance_field(const std::vector<std::uint8_t>& occupied,
                                  std::size_t nx, std::size_t ny);

// 4-connected flood from the grid border through unoccupied cells. Marked
// cells block; result marks the exterior.
std::vector<std::uint8_t> flood_exterior(const std::vector<std::uint8_t>& occupied,
                                         std::size_t nx, std::size_t ny);

// Boundary of the unbounded complement component of a rasterized path, traced
// as a closed polyline along cell edges. Throws ResolutionError if a path
// segment jumps more than one cell per sample step.
PlanarCurve trace_outer_boundary(const std::vector<std::uint8_t>& exterior,
                                 const RasterGrid& grid);

} // namespace loewner

#endif
