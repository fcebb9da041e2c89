#ifndef LOEWNER_DRIVING_HPP
#define LOEWNER_DRIVING_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "loewner/complex_util.hpp"

namespace loewner {

// Sampled driving function on a half-plane-capacity grid, interpreted as
// piecewise linear between samples. times[0] == 0 always.
struct DrivingFunction {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return times.size(); }
    double total_capacity() const { return times.empty() ? 0.0 : times.back(); }

    void validate() const;

    // Piecewise-linear evaluation; clamps outside the grid.
    double at(double t) const;

    double oscillation() const; // max - min of values

    // Restriction to [0, T], inserting an interpolated sample at T if needed.
    DrivingFunction restrict_to(double T) const;

    // Resample on a uniform grid of n+1 points over the same capacity span.
    DrivingFunction resample_uniform(std::size_t n) const;
};

// Text format: "t,w" per line, '#' comments, strictly increasing t from 0.
DrivingFunction read_driving(std::istream& in);
DrivingFunction read_driving_file(const std::string& path);
void write_driving(std::ostream& out, const DrivingFunction& w);
void write_driving_file(const std::string& path, const DrivingFunction& w);

} // namespace loewner

#endif
