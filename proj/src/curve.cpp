#include "loewner/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "loewner/conformal_map.hpp"

namespace loewner {

double PlanarCurve::length() const {
    double total = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i)
        total += std::abs(segment_end(i) - segment_start(i));
    return total;
}

void PlanarCurve::validate() const {
    if (points.size() < 3) throw DomainError("curve needs at least 3 points");
    for (const auto& p : points)
        if (!is_finite(p)) throw NonFiniteError("curve point not finite");
    for (std::size_t i = 0; i < segment_count(); ++i)
        if (segment_start(i) == segment_end(i))
            throw DomainError("consecutive curve points coincide");
}

namespace {

double cross(const Complex& a, const Complex& b) {
    return a.real() * b.imag() - a.imag() * b.real();
}

int orient(const Complex& a, const Complex& b, const Complex& c) {
    double v = cross(b - a, c - a);
    double scale = std::abs(b - a) * std::abs(c - a);
    if (std::abs(v) <= 1e-14 * scale) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(const Complex& a, const Complex& b, const Complex& p) {
    return std::min(a.real(), b.real()) - 1e-14 <= p.real() &&
           p.real() <= std::max(a.real(), b.real()) + 1e-14 &&
           std::min(a.imag(), b.imag()) - 1e-14 <= p.imag() &&
           p.imag() <= std::max(a.imag(), b.imag()) + 1e-14;
}

} // namespace

bool segments_intersect(const Complex& a, const Complex& b, const Complex& c,
                        const Complex& d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool PlanarCurve::is_simple() const {
    const std::size_t m = segment_count();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            // Skip adjacent segments (sharing an endpoint).
            if (j == i + 1) continue;
            if (closed && i == 0 && j == m - 1) continue;
            if (segments_intersect(segment_start(i), segment_end(i),
                                   segment_start(j), segment_end(j)))
                return false;
        }
    }
    return true;
}

PlanarCurve PlanarCurve::resample(std::size_t n) const {
    if (n < 2) throw DomainError("resample needs n >= 2");
    const double total = length();
    if (total <= 0.0) throw DomainError("zero-length curve");

    std::vector<double> cum(1, 0.0);
    cum.reserve(segment_count() + 1);
    for (std::size_t i = 0; i < segment_count(); ++i)
        cum.push_back(cum.back() + std::abs(segment_end(i) - segment_start(i)));

    auto at_arclength = [&](double s) {
        auto it = std::upper_bound(cum.begin(), cum.end(), s);
        std::size_t seg = it == cum.begin() ? 0 : std::size_t(it - cum.begin()) - 1;
        if (seg >= segment_count()) seg = segment_count() - 1;
        double seg_len = cum[seg + 1] - cum[seg];
        double f = seg_len > 0 ? (s - cum[seg]) / seg_len : 0.0;
        return segment_start(seg) + f * (segment_end(seg) - segment_start(seg));
    };

    PlanarCurve out;
    out.closed = closed;
    out.points.reserve(n);
    if (closed) {
        for (std::size_t k = 0; k < n; ++k)
            out.points.push_back(at_arclength(total * double(k) / double(n)));
    } else {
        for (std::size_t k = 0; k < n; ++k)
            out.points.push_back(at_arclength(total * double(k) / double(n - 1)));
        out.points.front() = points.front();
        out.points.back() = points.back();
    }
    return out;
}

PlanarCurve PlanarCurve::rebase(std::size_t k) const {
    if (!closed) throw DomainError("rebase requires a closed curve");
    PlanarCurve out;
    out.closed = true;
    out.points.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out.points.push_back(points[(k + i) % points.size()]);
    return out;
}

int PlanarCurve::winding_number(const Complex& z) const {
    double angle = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i) {
        Complex a = segment_start(i) - z;
        Complex b = segment_end(i) - z;
        angle += std::atan2(cross(a, b), a.real() * b.real() + a.imag() * b.imag());
    }
    return int(std::lround(angle / (2.0 * kPi)));
}

double segment_distance(const Complex& a, const Complex& b, const Complex& z) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z - a).real() * d.real() + (z - a).imag() * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

double PlanarCurve::distance_to(const Complex& z) const {
    double best = std::abs(z - points.front());
    for (std::size_t i = 0; i < segment_count(); ++i)
        best = std::min(best, segment_distance(segment_start(i), segment_end(i), z));
    return best;
}

std::pair<Complex, Complex> PlanarCurve::bounding_box() const {
    double lo_x = points.front().real(), hi_x = lo_x;
    double lo_y = points.front().imag(), hi_y = lo_y;
    for (const auto& p : points) {
        lo_x = std::min(lo_x, p.real());
        hi_x = std::max(hi_x, p.real());
        lo_y = std::min(lo_y, p.imag());
        hi_y = std::max(hi_y, p.imag());
    }
    return {Complex(lo_x, lo_y), Complex(hi_x, hi_y)};
}

PlanarCurve read_curve(std::istream& in) {
    PlanarCurve curve;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r\n");
        line = line.substr(b, e - b + 1);
        if (line == "closed=true") {
            curve.closed = true;
            continue;
        }
        if (line == "closed=false") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("curve line " + std::to_string(lineno) + ": expected re,im");
        try {
            double re = std::stod(line.substr(0, comma));
            double im = std::stod(line.substr(comma + 1));
            curve.points.emplace_back(re, im);
        } catch (const std::exception&) {
            throw ParseError("curve line " + std::to_string(lineno) + ": bad number");
        }
    }
    curve.validate();
    return curve;
}

PlanarCurve read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curve file " + path);
    return read_curve(in);
}

void write_curve(std::ostream& out, const PlanarCurve& curve) {
    out << std::setprecision(17);
    if (curve.closed) out << "closed=true\n";
    for (const auto& p : curve.points) out << p.real() << "," << p.imag() << "\n";
}

void write_curve_file(const std::string& path, const PlanarCurve& curve) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open curve file for writing " + path);
    write_curve(out, curve);
}

PlanarCurve make_circle(const Complex& center, double radius, std::size_t n) {
    PlanarCurve c;
    c.closed = true;
    c.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double th = 2.0 * kPi * double(k) / double(n);
        c.points.push_back(center + radius * Complex(std::cos(th), std::sin(th)));
    }
    return c;
}

PlanarCurve map_circle(const ConformalMap& f, double r, std::size_t n) {
    PlanarCurve c;
    c.closed = true;
    c.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double th = 2.0 * kPi * double(k) / double(n);
        c.points.push_back(f.apply(r * Complex(std::cos(th), std::sin(th))));
    }
    return c;
}

} // namespace loewner
