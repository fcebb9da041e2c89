#include "loewner/driving.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

void DrivingFunction::validate() const {
    if (times.size() != values.size())
        throw DomainError("driving times/values length mismatch");
    if (times.size() < 2) throw DomainError("driving needs at least 2 samples");
    if (times.front() != 0.0) throw DomainError("driving must start at t = 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw DomainError("driving times must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw NonFiniteError("driving value not finite");
}

double DrivingFunction::at(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = std::size_t(it - times.begin()) - 1;
    double f = (t - times[i]) / (times[i + 1] - times[i]);
    return values[i] + f * (values[i + 1] - values[i]);
}

double DrivingFunction::oscillation() const {
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

DrivingFunction DrivingFunction::restrict_to(double T) const {
    if (T <= 0.0 || T > total_capacity() + 1e-12)
        throw DomainError("restriction time outside capacity span");
    DrivingFunction out;
    for (std::size_t i = 0; i < times.size() && times[i] < T; ++i) {
        out.times.push_back(times[i]);
        out.values.push_back(values[i]);
    }
    if (out.times.empty() || out.times.back() < T) {
        out.times.push_back(T);
        out.values.push_back(at(T));
    }
    return out;
}

DrivingFunction DrivingFunction::resample_uniform(std::size_t n) const {
    if (n < 1) throw DomainError("resample needs n >= 1");
    DrivingFunction out;
    double T = total_capacity();
    out.times.reserve(n + 1);
    out.values.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double t = T * double(k) / double(n);
        out.times.push_back(t);
        out.values.push_back(at(t));
    }
    return out;
}

DrivingFunction read_driving(std::istream& in) {
    DrivingFunction w;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r\n");
        line = line.substr(b, e - b + 1);
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("driving line " + std::to_string(lineno) + ": expected t,w");
        try {
            w.times.push_back(std::stod(line.substr(0, comma)));
            w.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError("driving line " + std::to_string(lineno) + ": bad number");
        }
    }
    w.validate();
    return w;
}

DrivingFunction read_driving_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open driving file " + path);
    return read_driving(in);
}

void write_driving(std::ostream& out, const DrivingFunction& w) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < w.times.size(); ++i)
        out << w.times[i] << "," << w.values[i] << "\n";
}

void write_driving_file(const std::string& path, const DrivingFunction& w) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open driving file for writing " + path);
    write_driving(out, w);
}

} // namespace loewner
