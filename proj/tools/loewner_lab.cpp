// loewner-lab: command-line front end for the Loewner energy / loop measure
// toolkit. Subcommands: drive, trace, energy, loopmass, verify.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "loewner/energy.hpp"
#include "loewner/loop_measure.hpp"
#include "loewner/verify.hpp"

using namespace loewner;
using Json = nlohmann::json;

namespace {

struct GlobalOpts {
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool no_timestamp = false;
    std::string format = "json";
};

void stamp(Json& j, const GlobalOpts& g) {
    if (!g.no_timestamp) {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    }
}

std::string to_csv(const Json& j, const std::string& prefix = "") {
    std::ostringstream out;
    out.precision(17);
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            out << to_csv(*it, key);
        } else if (it->is_array()) {
            out << key << ",";
            for (std::size_t i = 0; i < it->size(); ++i)
                out << (i ? ";" : "") << (*it)[i].dump();
            out << "\n";
        } else {
            out << key << "," << it->dump() << "\n";
        }
    }
    return out.str();
}

void emit(const Json& j, const std::string& out_path, const GlobalOpts& g) {
    std::string payload = g.format == "csv" ? to_csv(j) : j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << payload;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError("cannot open output file " + out_path);
        out << payload;
    }
}

// Set specs: curve:<file> | circle:<cx>,<cy>,<r> | hull:<x0>,<r> |
// slit:<x0>,<h> | annulus:<rin>,<rout>[,bump=<c>]
CompactSet parse_set(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("bad set spec: " + spec);
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    auto nums = [&rest]() {
        std::vector<double> v;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto eq = tok.find('=');
            v.push_back(std::stod(eq == std::string::npos ? tok : tok.substr(eq + 1)));
        }
        return v;
    };
    if (kind == "curve") return CompactSet::from_curve(read_curve_file(rest));
    if (kind == "circle") {
        auto v = nums();
        if (v.size() != 3) throw ParseError("circle needs cx,cy,r");
        return CompactSet::from_curve(make_circle(Complex(v[0], v[1]), v[2], 1024));
    }
    if (kind == "hull") {
        auto v = nums();
        if (v.size() != 2) throw ParseError("hull needs x0,r");
        return CompactSet::from_hull(HullSpec::semi_disk(v[0], v[1]));
    }
    if (kind == "slit") {
        auto v = nums();
        if (v.size() != 2) throw ParseError("slit needs x0,h");
        return CompactSet::from_hull(HullSpec::vertical_slit(v[0], v[1]));
    }
    if (kind == "annulus") {
        auto v = nums();
        if (v.size() == 2)
            return CompactSet::annulus_complement(ConformalMap::identity(), v[0], v[1]);
        if (v.size() == 3) {
            ConformalMap f = ConformalMap::single(
                Polynomial{{Complex(0.0), Complex(1.0), Complex(v[2], 0.0)}});
            return CompactSet::annulus_complement(f, v[0], v[1]);
        }
        throw ParseError("annulus needs rin,rout[,bump=c]");
    }
    throw ParseError("unknown set kind: " + kind);
}

DomainSpec parse_domain(const std::string& spec) {
    if (spec == "plane") return DomainSpec::whole_plane();
    if (spec == "half-plane") return DomainSpec::upper_half_plane();
    auto colon = spec.find(':');
    if (colon != std::string::npos && spec.substr(0, colon) == "half-plane-hull") {
        std::stringstream ss(spec.substr(colon + 1));
        double x0, r;
        char comma;
        if (ss >> x0 >> comma >> r)
            return DomainSpec::half_plane_minus(HullSpec::semi_disk(x0, r));
    }
    throw ParseError("unknown domain spec: " + spec);
}

ConformalMap bump_map(double c) {
    return ConformalMap::single(Polynomial{{Complex(0.0), Complex(1.0), Complex(c, 0.0)}});
}

Json run_config_echo(const std::string& subcommand, const GlobalOpts& g, const Json& extra) {
    Json j{{"subcommand", subcommand},
           {"seed", resolve_seed(g.seed)},
           {"threads", g.threads},
           {"format", g.format}};
    j.update(extra);
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loewner energy and Brownian/Werner loop-measure toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Monte Carlo master seed")->envname("LOEWNER_LAB_SEED");
    app.add_option("--threads", g.threads, "worker streams")->envname("LOEWNER_LAB_THREADS");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit timestamps from outputs");
    app.add_option("--format", g.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.set_config("--config", "", "INI config file (flags override)");

    // drive -----------------------------------------------------------------
    auto* drive = app.add_subcommand("drive", "curve file -> driving file (zipper)");
    std::string drive_in, drive_out;
    std::size_t drive_n = 2000;
    bool drive_check = true;
    drive->add_option("--in", drive_in, "input .curve file")->required();
    drive->add_option("--out", drive_out, "output .drv file")->required();
    drive->add_option("--n", drive_n, "zipper resampling count");
    drive->add_flag("--check-simple,!--no-check-simple", drive_check, "O(n^2) simplicity test");

    // trace -----------------------------------------------------------------
    auto* trace = app.add_subcommand("trace", "driving file -> curve file (forward solver)");
    std::string trace_in, trace_out;
    int trace_substeps = 2;
    trace->add_option("--in", trace_in, "input .drv file")->required();
    trace->add_option("--out", trace_out, "output .curve file")->required();
    trace->add_option("--substeps", trace_substeps, "substeps per driving interval");

    // energy ----------------------------------------------------------------
    auto* energy = app.add_subcommand("energy", "chordal or loop Loewner energy");
    std::string energy_in, energy_out, energy_mode = "chord";
    std::size_t energy_n = 2000, energy_root = 0;
    std::vector<double> energy_eps;
    energy->add_option("--in", energy_in, ".curve or .drv file")->required();
    energy->add_option("--mode", energy_mode, "chord|loop")
        ->check(CLI::IsMember({"chord", "loop"}));
    energy->add_option("--out", energy_out, "output JSON (default stdout)");
    energy->add_option("--n", energy_n, "zipper grid");
    energy->add_option("--root", energy_root, "loop root index");
    energy->add_option("--eps", energy_eps, "loop cut-off schedule (decreasing)");

    // loopmass ----------------------------------------------------------------
    auto* loopmass = app.add_subcommand("loopmass", "Brownian/Werner mass estimates");
    std::string lm_method = "brownian", lm_k1, lm_k2, lm_domain = "plane", lm_out;
    std::string lm_driving;
    std::size_t lm_samples = 200000;
    double lm_tmin = 0.0, lm_tmax = 0.0, lm_T = 1.0;
    double lm_hull_x0 = 2.0, lm_hull_r = 1.0;
    loopmass->add_option("--method", lm_method, "brownian|werner|schwarzian")
        ->check(CLI::IsMember({"brownian", "werner", "schwarzian"}));
    loopmass->add_option("--k1", lm_k1, "first target set spec");
    loopmass->add_option("--k2", lm_k2, "second target set spec");
    loopmass->add_option("--domain", lm_domain, "plane|half-plane|half-plane-hull:x0,r");
    loopmass->add_option("--samples", lm_samples, "Monte Carlo samples");
    loopmass->add_option("--t-min", lm_tmin, "proposal t lower bound");
    loopmass->add_option("--t-max", lm_tmax, "proposal t upper bound");
    loopmass->add_option("--driving", lm_driving, "driving file (schwarzian route)");
    loopmass->add_option("--T", lm_T, "capacity horizon (schwarzian route)");
    loopmass->add_option("--hull-x0", lm_hull_x0, "hull base point (schwarzian route)");
    loopmass->add_option("--hull-r", lm_hull_r, "hull radius (schwarzian route)");
    loopmass->add_option("--out", lm_out, "output JSON (default stdout)");

    // verify ------------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "numerical checks of the restriction identities");
    std::string v_identity, v_outdir = "reports";
    std::size_t v_samples = 200000, v_grid = 800, v_loop_n = 2000;
    double v_k = 3.0, v_T = 1.0, v_hull_x0 = 2.0, v_hull_r = 1.0, v_bump = 0.2;
    std::vector<double> v_eps{0.3, 0.2, 0.1};
    verify->add_option("--identity", v_identity,
                       "chordal_restriction|two_domain|loop_restriction|cutoff")
        ->required()
        ->check(CLI::IsMember(
            {"chordal_restriction", "two_domain", "loop_restriction", "cutoff"}));
    verify->add_option("--out-dir", v_outdir, "report directory");
    verify->add_option("--samples", v_samples, "Monte Carlo samples per estimate");
    verify->add_option("--grid-n", v_grid, "driving/zipper grid");
    verify->add_option("--loop-n", v_loop_n, "loop-energy zipper grid");
    verify->add_option("--k", v_k, "pass threshold in combined error units");
    verify->add_option("--T", v_T, "capacity horizon (chordal identity)");
    verify->add_option("--hull-x0", v_hull_x0, "hull base point");
    verify->add_option("--hull-r", v_hull_r, "hull radius");
    verify->add_option("--bump", v_bump, "disk-map coefficient c in z + c z^2");
    verify->add_option("--eps", v_eps, "cutoff eps list");

    for (auto* sub : {drive, trace, energy, loopmass, verify}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*drive) {
            PlanarCurve curve = read_curve_file(drive_in);
            SolverOptions opts;
            opts.check_simple = drive_check;
            DrivingFunction w = compute_driving(curve, drive_n, opts);
            write_driving_file(drive_out, w);
            return 0;
        }
        if (*trace) {
            DrivingFunction w = read_driving_file(trace_in);
            PlanarCurve curve = solve_forward(w, trace_substeps);
            write_curve_file(trace_out, curve);
            return 0;
        }
        if (*energy) {
            Json out;
            if (energy_mode == "chord") {
                DrivingFunction w;
                if (energy_in.size() > 4 && energy_in.substr(energy_in.size() - 4) == ".drv") {
                    w = read_driving_file(energy_in);
                } else {
                    w = compute_driving(read_curve_file(energy_in), energy_n);
                }
                EnergyReport rep;
                rep.value = chordal_energy(w);
                rep.resolution = energy_n;
                rep.converged = true;
                out = to_json(rep);
            } else {
                PlanarCurve curve = read_curve_file(energy_in);
                if (!curve.closed) throw DomainError("loop mode needs closed=true curve");
                LoopEnergyOptions lo;
                lo.n = energy_n;
                std::vector<double> eps =
                    energy_eps.empty() ? default_eps_schedule() : energy_eps;
                EnergyReport rep = loop_energy(curve, energy_root, eps, lo);
                out = to_json(rep);
            }
            out["config"] = run_config_echo("energy", g,
                                            Json{{"in", energy_in},
                                                 {"mode", energy_mode},
                                                 {"n", energy_n},
                                                 {"root", energy_root}});
            stamp(out, g);
            emit(out, energy_out, g);
            return 0;
        }
        if (*loopmass) {
            McParams p;
            p.n_samples = lm_samples;
            p.seed = resolve_seed(g.seed);
            if (g.threads) p.streams = g.threads;
            p.t_min = lm_tmin;
            p.t_max = lm_tmax;

            Json out;
            if (lm_method == "schwarzian") {
                DrivingFunction w;
                if (!lm_driving.empty()) {
                    w = read_driving_file(lm_driving);
                } else {
                    for (int k = 0; k <= 800; ++k) {
                        w.times.push_back(lm_T * k / 800.0);
                        w.values.push_back(0.0);
                    }
                }
                SchwarzianMass m =
                    schwarzian_bridge_mass(w, HullSpec::semi_disk(lm_hull_x0, lm_hull_r), lm_T);
                out = Json{{"mass", m.value},
                           {"refinement_delta", m.refinement_delta},
                           {"refinement_warning", m.refinement_warning}};
            } else {
                if (lm_k1.empty() || lm_k2.empty())
                    throw ParseError("--k1 and --k2 are required for Monte Carlo masses");
                CompactSet k1 = parse_set(lm_k1);
                CompactSet k2 = parse_set(lm_k2);
                DomainSpec dom = parse_domain(lm_domain);
                MassEstimate est = lm_method == "brownian" ? brownian_mass(k1, k2, dom, p)
                                                           : werner_mass(k1, k2, dom, p);
                out = to_json(est);
            }
            out["config"] = run_config_echo("loopmass", g,
                                            Json{{"method", lm_method},
                                                 {"k1", lm_k1},
                                                 {"k2", lm_k2},
                                                 {"domain", lm_domain},
                                                 {"samples", lm_samples},
                                                 {"T", lm_T}});
            stamp(out, g);
            emit(out, lm_out, g);
            return 0;
        }
        if (*verify) {
            VerifyOptions opts;
            opts.mc.n_samples = v_samples;
            opts.mc.seed = resolve_seed(g.seed);
            if (g.threads) opts.mc.streams = g.threads;
            opts.k_sigma = v_k;
            opts.grid_n = v_grid;
            opts.loop.n = v_loop_n;

            std::vector<IdentityReport> reports;
            if (v_identity == "chordal_restriction") {
                DrivingFunction w;
                for (std::size_t k = 0; k <= v_grid; ++k) {
                    w.times.push_back(v_T * double(k) / double(v_grid));
                    w.values.push_back(0.0);
                }
                reports.push_back(verify_chordal_restriction(
                    w, HullSpec::semi_disk(v_hull_x0, v_hull_r), v_T, opts));
            } else if (v_identity == "two_domain") {
                PlanarCurve axis;
                for (int k = 0; k < 600; ++k)
                    axis.points.push_back(Complex(0.0, 6.0 * k / 599.0));
                reports.push_back(verify_two_domain(
                    axis, HullSpec::semi_disk(v_hull_x0, v_hull_r),
                    HullSpec::semi_disk(-v_hull_x0, v_hull_r), opts));
            } else if (v_identity == "loop_restriction") {
                reports.push_back(
                    verify_loop_restriction(bump_map(v_bump), 0.7, 1.3, 0.8, 1.2, opts));
            } else {
                reports = verify_cutoff(bump_map(v_bump), v_eps, opts);
            }

            bool all_pass = true;
            for (const auto& rep : reports) {
                std::string path = write_report(rep, v_outdir);
                std::cout << rep.identity << ": " << (rep.pass ? "PASS" : "FAIL")
                          << "  lhs=" << rep.lhs << " rhs=" << rep.rhs
                          << " -> " << path << "\n";
                all_pass = all_pass && rep.pass;
            }
            return all_pass ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
