#include "loewner/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loewner {

RasterGrid RasterGrid::cover(const Complex& lo, const Complex& hi, std::size_t resolution,
                             double margin_cells) {
    if (resolution < 8) throw DomainError("raster resolution too small");
    double w = hi.real() - lo.real(), h = hi.imag() - lo.imag();
    double extent = std::max({w, h, 1e-12});
    return cover_cell(lo, hi, extent / double(resolution), margin_cells);
}

RasterGrid RasterGrid::cover_cell(const Complex& lo, const Complex& hi, double cell,
                                  double margin_cells) {
    if (!(cell > 0.0)) throw DomainError("raster cell must be positive");
    double w = hi.real() - lo.real(), h = hi.imag() - lo.imag();
    RasterGrid g;
    g.cell = cell;
    double mx = margin_cells * g.cell;
    g.origin = lo - Complex(mx, mx);
    g.nx = std::size_t(std::ceil(w / g.cell)) + 2 * std::size_t(margin_cells) + 1;
    g.ny = std::size_t(std::ceil(h / g.cell)) + 2 * std::size_t(margin_cells) + 1;
    return g;
}

bool RasterGrid::cell_of(const Complex& z, std::size_t& ix, std::size_t& iy) const {
    double fx = (z.real() - origin.real()) / cell;
    double fy = (z.imag() - origin.imag()) / cell;
    if (fx < 0.0 || fy < 0.0) return false;
    std::size_t cx = std::size_t(fx), cy = std::size_t(fy);
    if (cx >= nx || cy >= ny) return false;
    ix = cx;
    iy = cy;
    return true;
}

std::vector<std::uint8_t> rasterize_polyline(const PlanarCurve& path, const RasterGrid& grid) {
    std::vector<std::uint8_t> occ(grid.size(), 0);
    auto mark = [&](const Complex& z) {
        std::size_t ix, iy;
        if (grid.cell_of(z, ix, iy)) occ[grid.index(ix, iy)] = 1;
    };
    for (std::size_t s = 0; s < path.segment_count(); ++s) {
        Complex a = path.segment_start(s), b = path.segment_end(s);
        mark(a);
        double len = std::abs(b - a);
        // Sub-cell stepping: marks a 4-connected chain (diagonal crossings
        // mark both side cells within half-cell resolution).
        std::size_t steps = std::max<std::size_t>(1, std::size_t(std::ceil(len / (0.45 * grid.cell))));
        for (std::size_t k = 1; k <= steps; ++k) {
            Complex z = a + (b - a) * (double(k) / double(steps));
            mark(z);
            // Fill the 4-neighbourhood gap when the step crossed a corner.
            Complex zm = a + (b - a) * ((double(k) - 0.5) / double(steps));
            mark(zm);
        }
    }
    return occ;
}

// Felzenszwalb-Huttenlocher 1D squared distance transform.
namespace {

void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = int(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = double(q) - double(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

} // namespace

std::vector<float> distance_field(const std::vector<std::uint8_t>& occupied,
                                  std::size_t nx, std::size_t ny) {
    const double inf = 1e18;
    std::vector<double> work(nx * ny);
    for (std::size_t i = 0; i < nx * ny; ++i) work[i] = occupied[i] ? 0.0 : inf;

    std::vector<double> f(std::max(nx, ny)), d(std::max(nx, ny));
    std::vector<int> v(std::max(nx, ny));
    std::vector<double> z(std::max(nx, ny) + 1);

    // Columns, then rows.
    for (std::size_t x = 0; x < nx; ++x) {
        f.resize(ny);
        d.resize(ny);
        for (std::size_t y = 0; y < ny; ++y) f[y] = work[y * nx + x];
        edt_1d(f, d, v, z);
        for (std::size_t y = 0; y < ny; ++y) work[y * nx + x] = d[y];
    }
    std::vector<float> out(nx * ny);
    for (std::size_t y = 0; y < ny; ++y) {
        f.resize(nx);
        d.resize(nx);
        for (std::size_t x = 0; x < nx; ++x) f[x] = work[y * nx + x];
        edt_1d(f, d, v, z);
        for (std::size_t x = 0; x < nx; ++x) out[y * nx + x] = float(std::sqrt(d[x]));
    }
    return out;
}

std::vector<std::uint8_t> flood_exterior(const std::vector<std::uint8_t>& occupied,
                                         std::size_t nx, std::size_t ny) {
    std::vector<std::uint8_t> ext(nx * ny, 0);
    std::vector<std::size_t> stack;
    auto push = [&](std::size_t x, std::size_t y) {
        std::size_t i = y * nx + x;
        if (!occupied[i] && !ext[i]) {
            ext[i] = 1;
            stack.push_back(i);
        }
    };
    for (std::size_t x = 0; x < nx; ++x) {
        push(x, 0);
        push(x, ny - 1);
    }
    for (std::size_t y = 0; y < ny; ++y) {
        push(0, y);
        push(nx - 1, y);
    }
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        std::size_t x = i % nx, y = i / nx;
        if (x > 0) push(x - 1, y);
        if (x + 1 < nx) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y + 1 < ny) push(x, y + 1);
    }
    return ext;
}

PlanarCurve trace_outer_boundary(const std::vector<std::uint8_t>& exterior,
                                 const RasterGrid& grid) {
    const std::size_t nx = grid.nx, ny = grid.ny;
    // Directed half-edges between an exterior cell and a filled neighbour,
    // oriented with the filled region on the left, keyed by start corner on
    // the (nx+1) x (ny+1) lattice. Directions: 0 = +x, 1 = +y, 2 = -x, 3 = -y.
    auto corner = [&](std::size_t cx, std::size_t cy) { return cy * (nx + 1) + cx; };
    std::vector<std::uint8_t> out_edges((nx + 1) * (ny + 1), 0);

    auto is_ext = [&](long x, long y) {
        if (x < 0 || y < 0 || std::size_t(x) >= nx || std::size_t(y) >= ny) return true;
        return exterior[std::size_t(y) * nx + std::size_t(x)] != 0;
    };

    for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t x = 0; x < nx; ++x) {
            if (is_ext(long(x), long(y))) continue;
            if (is_ext(long(x), long(y) - 1)) out_edges[corner(x, y)] |= 1u << 0;
            if (is_ext(long(x) + 1, long(y))) out_edges[corner(x + 1, y)] |= 1u << 1;
            if (is_ext(long(x), long(y) + 1)) out_edges[corner(x + 1, y + 1)] |= 1u << 2;
            if (is_ext(long(x) - 1, long(y))) out_edges[corner(x, y + 1)] |= 1u << 3;
        }
    }

    auto step = [&](std::size_t c, int dir) -> std::size_t {
        std::size_t cx = c % (nx + 1), cy = c / (nx + 1);
        switch (dir) {
            case 0: return corner(cx + 1, cy);
            case 1: return corner(cx, cy + 1);
            case 2: return corner(cx - 1, cy);
            default: return corner(cx, cy - 1);
        }
    };

    // Walk loops; at saddle corners prefer the right turn so pinched lobes
    // merge into one outline. The longest loop is the outer boundary.
    PlanarCurve best;
    std::vector<std::uint8_t> walked((nx + 1) * (ny + 1), 0);
    for (std::size_t start = 0; start < out_edges.size(); ++start) {
        if (!out_edges[start]) continue;
        int dir = -1;
        for (int d = 0; d < 4 && dir < 0; ++d)
            if (out_edges[start] & (1u << d)) dir = d;
        if (walked[start] & (1u << dir)) continue;

        PlanarCurve loop;
        loop.closed = true;
        std::size_t cur = start;
        int cur_dir = dir;
        while (true) {
            if (walked[cur] & (1u << cur_dir)) break; // closed (or merged)
            walked[cur] |= 1u << cur_dir;
            std::size_t cx = cur % (nx + 1), cy = cur / (nx + 1);
            loop.points.push_back(grid.origin +
                                  Complex(double(cx) * grid.cell, double(cy) * grid.cell));
            cur = step(cur, cur_dir);
            // Preference: right turn, straight, left turn, reverse.
            int cands[4] = {(cur_dir + 3) % 4, cur_dir, (cur_dir + 1) % 4, (cur_dir + 2) % 4};
            int chosen = -1;
            for (int c : cands) {
                if ((out_edges[cur] & (1u << c)) && !(walked[cur] & (1u << c))) {
                    chosen = c;
                    break;
                }
            }
            if (chosen < 0) break;
            cur_dir = chosen;
        }
        if (loop.points.size() > best.points.size()) best = std::move(loop);
    }
    if (best.points.size() < 4)
        throw ResolutionError("no boundary contour found; grid too coarse");
    return best;
}

} // namespace loewner
