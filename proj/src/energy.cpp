#include "loewner/energy.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/loewner_flow.hpp"

namespace loewner {

double chordal_energy(const DrivingFunction& w) {
    w.validate();
    double e = 0.0;
    for (std::size_t i = 1; i < w.times.size(); ++i) {
        double dw = w.values[i] - w.values[i - 1];
        double dt = w.times[i] - w.times[i - 1];
        e += dw * dw / dt;
    }
    return 0.5 * e;
}

namespace {

// Maps curve points, truncates the far tail, and rebases so the chord starts
// at 0 on the real axis.
PlanarCurve image_chord(const PlanarCurve& curve, const ConformalMap& phi, double r_cap) {
    PlanarCurve out;
    out.points.reserve(curve.points.size());
    for (const auto& p : curve.points) {
        Complex z = phi.apply(p);
        if (std::abs(z) > r_cap) break;
        out.points.push_back(z);
    }
    if (out.points.size() < 3) throw DomainError("image chord too short after truncation");
    double base = out.points.front().real();
    for (auto& z : out.points) z -= base;
    out.points.front() = Complex(0.0, 0.0);
    return out;
}

} // namespace

double chordal_energy_in_domain(const PlanarCurve& curve, const ConformalMap& phi,
                                const ChordEnergyOptions& opts) {
    // Resample in the source frame; the image frame may reach toward infinity
    // where arc-length resampling would starve the base of samples.
    PlanarCurve chord = image_chord(curve.resample(opts.n), phi, opts.r_cap);
    SolverOptions sopts;
    sopts.check_simple = opts.check_simple;
    sopts.resample = false;
    DrivingFunction w = compute_driving(chord, chord.points.size(), sopts);
    return chordal_energy(w);
}

std::vector<double> default_eps_schedule() { return {0.05, 0.02, 0.01, 0.005}; }

namespace {

// One cut-off evaluation of the loop energy: removes the root arc
// Gamma[0, eps], opens the complement to (approximately) H and drives the
// remaining chord. Returns the chordal energy of the image.
double loop_energy_at_eps(const PlanarCurve& loop, double eps, const LoopEnergyOptions& opts) {
    const std::size_t n = opts.n;
    PlanarCurve c = loop.resample(n);
    const std::size_t m = std::max<std::size_t>(2, std::size_t(std::lround(eps * double(n))));
    if (m + 3 >= n) throw DomainError("cut-off removes almost the whole curve");

    const Complex root = c.points[0];      // Gamma(0) -> infinity
    const Complex head = c.points[m];      // Gamma(eps) -> 0

    // Mobius sending head -> 0, root -> infinity with the removed arc landing
    // along the positive real axis, then the square root opening C \ [0,inf)
    // onto H.
    ConformalMap open_map;
    open_map.append(Mobius::zero_pole(head, root));
    open_map.append(SqrtOpening{SqrtOpening::Branch::upper});

    ConformalMap full = open_map;
    if (opts.hump_correction) {
        // Two-sided images of the removed arc form a crosscut through 0 (the
        // opened root arc). Zipping it flattens the residual hump that the
        // square root leaves, so the chord below really lives in H.
        std::vector<Complex> neg_branch, pos_branch;
        for (std::size_t j = 1; j < m; ++j) {
            const Complex tangent = c.points[j + 1] - c.points[j - 1];
            const double tl = std::abs(tangent);
            if (tl == 0.0) continue;
            const Complex normal = Complex(0.0, 1.0) * (tangent / tl);
            const double delta = 1e-7 * std::abs(c.points[j + 1] - c.points[j]);
            for (int side = -1; side <= 1; side += 2) {
                Complex z = open_map.apply(c.points[j] + double(side) * delta * normal);
                if (!is_finite(z) || std::abs(z) > opts.r_cap) continue;
                (z.real() < 0.0 ? neg_branch : pos_branch).push_back(z);
            }
        }
        std::sort(neg_branch.begin(), neg_branch.end(),
                  [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
        std::sort(pos_branch.begin(), pos_branch.end(),
                  [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
        std::vector<Complex> hump(std::move(neg_branch));
        hump.insert(hump.end(), pos_branch.begin(), pos_branch.end());
        ConformalMap hump_zip = zip_arc(hump);
        full.append(hump_zip);
    }

    // Image of the remaining chord, skipping the shared endpoint with the
    // removed arc (it sits on the crosscut fold).
    PlanarCurve chord;
    chord.points.reserve(n - m);
    for (std::size_t k = m + 1; k < n; ++k) {
        Complex z = full.apply(c.points[k]);
        if (std::abs(z) > opts.r_cap) break;
        if (!(z.imag() > 0.0)) continue; // below zipper resolution near the base
        chord.points.push_back(z);
    }
    if (chord.points.size() < 3) throw DomainError("opened chord too short");
    const double base = chord.points.front().real();
    for (auto& z : chord.points) z -= base;
    chord.points.insert(chord.points.begin(), Complex(0.0, 0.0));

    SolverOptions sopts;
    sopts.resample = false;
    DrivingFunction w = compute_driving(chord, chord.points.size(), sopts);
    return chordal_energy(w);
}

} // namespace

EnergyReport loop_energy(const PlanarCurve& curve, std::size_t root_index,
                         const std::vector<double>& eps_schedule,
                         const LoopEnergyOptions& opts) {
    if (!curve.closed) throw DomainError("loop energy requires a closed curve");
    if (eps_schedule.empty()) throw DomainError("empty eps schedule");
    for (std::size_t i = 1; i < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] < eps_schedule[i - 1]))
            throw DomainError("eps schedule must decrease");
    for (double e : eps_schedule)
        if (!(e > 0.0 && e < 1.0)) throw DomainError("eps must lie in (0,1)");

    PlanarCurve rooted = curve.rebase(root_index % curve.points.size());

    EnergyReport report;
    report.resolution = opts.n;
    for (double eps : eps_schedule) {
        report.per_eps.push_back(loop_energy_at_eps(rooted, eps, opts));
        report.eps = eps;
    }

    const auto& vals = report.per_eps;
    double value = vals.back();
    if (vals.size() >= 2) {
        // Richardson-style linear-in-eps extrapolation on the last two points.
        const double e1 = eps_schedule[vals.size() - 2], e2 = eps_schedule.back();
        const double v1 = vals[vals.size() - 2], v2 = vals.back();
        value = v2 + (v2 - v1) * e2 / (e1 - e2);
        const double last_delta = std::abs(v2 - v1);
        report.converged = last_delta <= opts.converge_rel * std::max(std::abs(v2), opts.zero_floor);
        if (vals.size() >= 3) {
            const double prev_delta = std::abs(vals[vals.size() - 2] - vals[vals.size() - 3]);
            report.refinement_ratio = prev_delta > 0.0 ? last_delta / prev_delta : 0.0;
        }
    }
    report.value = std::max(value, 0.0);
    if (report.value < opts.zero_floor && vals.back() < opts.zero_floor) {
        // Below the resolution floor: report the floor-clamped estimate as is;
        // callers treat it as indistinguishable from zero.
        report.value = std::max(report.value, 0.0);
    }
    return report;
}

PlanarCurve equipotential(const ConformalMap& f, double eps, std::size_t n) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0,1)");
    return map_circle(f, 1.0 - eps, n);
}

WpResult wp_integral(const ConformalMap& f, std::size_t n) {
    const std::size_t n_r = std::max<std::size_t>(4, n / 16);
    const int shells = 13;

    // Angular resolution must track the shell: near |z| = 1 the integrand can
    // peak on a scale ~ (1 - r), and an under-resolved ring hides divergence.
    auto ring_integral = [&](double r, std::size_t n_theta) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_theta; ++k) {
            double th = 2.0 * kPi * (double(k) + 0.5) / double(n_theta);
            Complex z = r * Complex(std::cos(th), std::sin(th));
            Jet3 j = f.jet(z);
            if (j.f1 == Complex(0.0, 0.0)) throw DegenerateError("f' vanishes in the disk");
            acc += std::norm(j.f2 / j.f1);
        }
        return acc / double(n_theta) * 2.0 * kPi * r;
    };

    WpResult res;
    std::vector<double> shell_sums;
    double lo = 0.0;
    for (int s = 0; s < shells; ++s) {
        double hi = 1.0 - std::pow(2.0, -double(s + 1));
        const std::size_t n_theta =
            std::min<std::size_t>(1u << 17, std::max<std::size_t>(n, 16u << (s + 1)));
        double sum = 0.0;
        for (std::size_t k = 0; k < n_r; ++k) {
            double r = lo + (hi - lo) * (double(k) + 0.5) / double(n_r);
            sum += ring_integral(r, n_theta) * (hi - lo) / double(n_r);
        }
        shell_sums.push_back(sum);
        res.value += sum;
        lo = hi;
    }
    // Divergence check: the outermost dyadic shells must decay.
    double last = shell_sums[shell_sums.size() - 1];
    double mid = shell_sums[shell_sums.size() - 2];
    double first = shell_sums[shell_sums.size() - 3];
    if (last > 1e-12 && last >= 0.99 * mid && mid >= 0.99 * first) {
        res.diverging = true;
        res.truncation_bound = last;
    } else if (mid > 0.0 && last > 0.0) {
        double ratio = std::min(last / mid, 0.95);
        res.truncation_bound = last * ratio / (1.0 - ratio);
    }
    return res;
}

} // namespace loewner
