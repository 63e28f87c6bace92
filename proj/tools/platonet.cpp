// platonet.cpp — Command-line entry point: geometry | simulate | quotient |
// reduced | steady | design | verify. CSV is the primary output format; JSON
// mirrors the same records. Exit codes: 0 success, 1 runtime error, 2 usage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "platonet/analytic.hpp"
#include "platonet/design.hpp"
#include "platonet/dynamics.hpp"
#include "platonet/geometry.hpp"
#include "platonet/io.hpp"
#include "platonet/reduced.hpp"
#include "platonet/symmetry.hpp"
#include "platonet/verify.hpp"

namespace {

using namespace platonet;

int env_threads() {
    if (const char* s = std::getenv("PLATONET_THREADS")) {
        const int v = std::atoi(s);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

struct OutputTarget {
    std::string path;   // empty = stdout

    template <typename Fn>
    void write(Fn&& fn) const {
        if (path.empty()) {
            fn(std::cout);
        } else {
            std::ofstream os(path);
            if (!os) throw std::runtime_error("cannot open output file: " + path);
            fn(os);
        }
    }
};

Solid parse_solid(const std::string& name) {
    auto s = solid_from_string(name);
    if (!s)
        throw CLI::ValidationError("--solid", "unknown solid '" + name +
                                   "' (tetrahedron|octahedron|cube|icosahedron|dodecahedron)");
    return *s;
}

CouplingMode parse_mode(const std::string& name) {
    if (name == "all-pairs") return CouplingMode::all_pairs;
    if (name == "nearest-neighbor") return CouplingMode::nearest_neighbor;
    throw CLI::ValidationError("--coupling-mode",
                               "expected all-pairs or nearest-neighbor, got '" + name + "'");
}

// "site:pop,site:pop" with 1-based sites
std::vector<std::pair<int, double>> parse_init(const std::string& text, int n) {
    std::vector<std::pair<int, double>> out;
    std::stringstream ss(text);
    std::string item;
    double sum = 0.0;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--init", "expected site:pop entries, got '" + item + "'");
        const int site = std::stoi(item.substr(0, colon));
        const double pop = std::stod(item.substr(colon + 1));
        if (site < 1 || site > n)
            throw CLI::ValidationError("--init", "site " + std::to_string(site) +
                                       " out of range 1.." + std::to_string(n));
        out.emplace_back(site - 1, pop);
        sum += pop;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw CLI::ValidationError("--init", "initial populations sum to " +
                                   format_double(sum) + " != 1");
    return out;
}

struct CommonNetworkFlags {
    std::string solid = "octahedron";
    std::string mode = "all-pairs";
    double v = 1.0;
    double gamma = 0.0;
    double gamma_diss = 0.0;
    double gamma_sink = 1.0;
    int sink_site = 0;       // 1-based; 0 = default (last site)
    std::string init;        // empty = paper default

    void attach(CLI::App* cmd) {
        cmd->add_option("--solid", solid,
                        "tetrahedron|octahedron|cube|icosahedron|dodecahedron")
            ->capture_default_str();
        cmd->add_option("--coupling-mode", mode, "all-pairs|nearest-neighbor")
            ->capture_default_str();
        cmd->add_option("--v", v, "dipole coupling strength")->capture_default_str();
        cmd->add_option("--gamma", gamma, "dephasing rate")->capture_default_str();
        cmd->add_option("--gamma-diss", gamma_diss, "local dissipation rate")
            ->capture_default_str();
        cmd->add_option("--gamma-sink", gamma_sink, "sink transfer rate")
            ->capture_default_str();
        cmd->add_option("--sink-site", sink_site, "1-based sink site (default: last)");
        cmd->add_option("--init", init, "initial charges, e.g. 1:0.5,2:0.5");
    }

    NetworkSpec build() const {
        NetworkSpec spec = default_spec(parse_solid(solid), parse_mode(mode), v,
                                        NoiseRates{gamma, gamma_diss, gamma_sink});
        if (sink_site != 0) {
            if (sink_site < 1 || sink_site > spec.size())
                throw CLI::ValidationError("--sink-site", "out of range");
            spec.sink_site = sink_site - 1;
        }
        if (!init.empty()) spec.initial = parse_init(init, spec.size());
        spec.validate();
        return spec;
    }
};

void emit_geometry(const NetworkSpec& spec, const std::string& format,
                   const OutputTarget& out) {
    const auto& s = spec.solid;
    const int n = s.size();
    if (format == "json") {
        Json j;
        j["solid"] = to_string(s.kind);
        j["n_sites"] = n;
        j["edge_length"] = s.edge_length;
        j["coordination_number"] = coordination_number(s);
        j["coupling_mode"] = to_string(spec.coupling.mode);
        for (int i = 0; i < n; ++i)
            j["vertices"].push_back({s.vertices[i].x(), s.vertices[i].y(), s.vertices[i].z()});
        for (int i = 0; i < n; ++i) {
            Json row = Json::array();
            for (int k = 0; k < n; ++k) row.push_back(s.adjacency(i, k));
            j["adjacency"].push_back(row);
        }
        Json pairs = Json::array();
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                pairs.push_back({{"i", i + 1},
                                 {"j", k + 1},
                                 {"r_ij", s.distance(i, k)},
                                 {"J_ij", spec.coupling.J(i, k)}});
        j["pairs"] = pairs;
        out.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
        return;
    }
    out.write([&](std::ostream& os) {
        CsvWriter w(os);
        w.comment("solid: " + std::string(to_string(s.kind)));
        w.comment("N: " + std::to_string(n) + ", N_c: " +
                  std::to_string(coordination_number(s)) +
                  ", edge_length: " + format_double(s.edge_length));
        for (int i = 0; i < n; ++i)
            w.comment("vertex " + std::to_string(i + 1) + ": (" +
                      format_double(s.vertices[i].x()) + ", " +
                      format_double(s.vertices[i].y()) + ", " +
                      format_double(s.vertices[i].z()) + ")");
        w.header({"i", "j", "r_ij", "J_ij", "adjacent"});
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                w.row({double(i + 1), double(k + 1), s.distance(i, k),
                       spec.coupling.J(i, k), s.adjacency(i, k) ? 1.0 : 0.0});
    });
}

void emit_trajectory(const NetworkSpec& spec, const Trajectory& traj,
                     const std::string& format, const OutputTarget& out) {
    const int n = spec.size();
    std::vector<std::string> cols{"t", "Gamma_t"};
    for (int i = 0; i < n; ++i)
        cols.push_back("rho_" + std::to_string(i + 1) + std::to_string(i + 1));
    cols.insert(cols.end(), {"rho_env", "rho_target", "trace_error"});
    auto row_of = [&](const ExcitationState& s) {
        std::vector<double> row{s.t, s.t * spec.rates.gamma_sink};
        for (int i = 0; i < n; ++i) row.push_back(s.rho(i, i).real());
        row.push_back(s.rho_env);
        row.push_back(s.rho_target);
        row.push_back(s.conservation_error());
        return row;
    };
    if (format == "json") {
        Json j = Json::array();
        for (const auto& s : traj.samples) {
            Json rec;
            auto row = row_of(s);
            for (std::size_t c = 0; c < cols.size(); ++c) rec[cols[c]] = row[c];
            j.push_back(rec);
        }
        out.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
    } else {
        out.write([&](std::ostream& os) {
            CsvWriter w(os);
            w.header(cols);
            for (const auto& s : traj.samples) w.row(row_of(s));
        });
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"platonet — transport on noisy Platonic quantum networks"};
    app.require_subcommand(1);

    std::string format = "csv";
    std::string output;
    app.add_option("--format", format, "csv|json")->capture_default_str();
    app.add_option("--output", output, "output path (default: stdout)");

    // ---- geometry ----
    auto* geo = app.add_subcommand("geometry", "print vertices, adjacency, couplings");
    CommonNetworkFlags geo_flags;
    geo_flags.attach(geo);
    geo->set_config("--config");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "integrate the full master equation");
    CommonNetworkFlags sim_flags;
    sim_flags.attach(sim);
    double sim_t_end = 200.0, sim_stride = 1.0;
    sim->add_option("--t-end", sim_t_end, "final time")->capture_default_str();
    sim->add_option("--stride", sim_stride, "output sampling stride")->capture_default_str();
    sim->set_config("--config");

    // ---- quotient ----
    auto* quo = app.add_subcommand("quotient", "site grouping and equivalent FCN");
    CommonNetworkFlags quo_flags;
    quo_flags.mode = "nearest-neighbor";
    quo_flags.attach(quo);
    bool quo_verify = false;
    double quo_t_end = 20.0;
    quo->add_flag("--verify", quo_verify, "also integrate full vs FCN and report deviations");
    quo->add_option("--t-end", quo_t_end, "verification horizon")->capture_default_str();
    quo->set_config("--config");

    // ---- reduced ----
    auto* red = app.add_subcommand("reduced", "integrate the six-variable reduced model");
    double red_J = 1.0, red_t_end = 200.0, red_stride = 1.0;
    int red_nc = 4;
    double red_gamma = 0.0, red_gdiss = 0.0, red_gsink = 1.0;
    red->add_option("--J", red_J, "FCN coupling")->capture_default_str();
    red->add_option("--Nc", red_nc, "coordination number")->capture_default_str();
    red->add_option("--gamma", red_gamma)->capture_default_str();
    red->add_option("--gamma-diss", red_gdiss)->capture_default_str();
    red->add_option("--gamma-sink", red_gsink)->capture_default_str();
    red->add_option("--t-end", red_t_end)->capture_default_str();
    red->add_option("--stride", red_stride)->capture_default_str();
    red->set_config("--config");

    // ---- steady ----
    auto* std_cmd = app.add_subcommand("steady", "closed-form steady sink population");
    double st_J = 1.0, st_gamma = 0.0, st_gdiss = 0.0, st_gsink = 1.0;
    int st_nc = 4;
    bool st_sweep = false;
    double st_from = 0.01, st_to = 100.0;
    int st_points = 50;
    bool st_log = true;
    std_cmd->add_option("--J", st_J)->capture_default_str();
    std_cmd->add_option("--Nc", st_nc)->capture_default_str();
    std_cmd->add_option("--gamma", st_gamma)->capture_default_str();
    std_cmd->add_option("--gamma-diss", st_gdiss)->capture_default_str();
    std_cmd->add_option("--gamma-sink", st_gsink)->capture_default_str();
    std_cmd->add_flag("--sweep", st_sweep, "emit (gamma, final_value) over a grid");
    std_cmd->add_option("--from", st_from)->capture_default_str();
    std_cmd->add_option("--to", st_to)->capture_default_str();
    std_cmd->add_option("--points", st_points)->capture_default_str();
    std_cmd->add_flag("--log,!--linear", st_log, "logarithmic grid");
    std_cmd->set_config("--config");

    // ---- design ----
    auto* des = app.add_subcommand("design", "solve couplings for target transport");
    std::string des_sweep = "gamma";
    double des_from = 0.1, des_to = 100.0;
    int des_points = 20;
    bool des_log = true;
    double des_gamma = 0.0, des_gdiss = 10.0, des_gsink = 10.0;
    int des_nc = 4;
    std::optional<double> des_target;
    double des_target_frac = 0.999;
    des->add_option("--sweep", des_sweep, "gamma|Nc|Gamma|Gamma-diss")->capture_default_str();
    des->add_option("--from", des_from)->capture_default_str();
    des->add_option("--to", des_to)->capture_default_str();
    des->add_option("--points", des_points)->capture_default_str();
    des->add_flag("--log,!--linear", des_log, "logarithmic grid");
    des->add_option("--gamma", des_gamma)->capture_default_str();
    des->add_option("--gamma-diss", des_gdiss)->capture_default_str();
    des->add_option("--gamma-sink", des_gsink)->capture_default_str();
    des->add_option("--Nc", des_nc)->capture_default_str();
    double des_target_raw = -1.0;
    des->add_option("--target", des_target_raw, "absolute target population in (0,1]");
    des->add_option("--target-fraction", des_target_frac,
                    "target as a fraction of the per-point maximum")
        ->capture_default_str();
    des->set_config("--config");

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "run the self-verification suite");
    std::string ver_filter;
    bool ver_negative = false;
    ver->add_option("--filter", ver_filter, "run only checks whose name contains this");
    ver->add_flag("--negative-control", ver_negative,
                  "also run the perturbed-convention control (must be detected)");
    ver->set_config("--config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    OutputTarget out{output};
    try {
        if (geo->parsed()) {
            emit_geometry(geo_flags.build(), format, out);
        } else if (sim->parsed()) {
            NetworkSpec spec = sim_flags.build();
            const int n_samples =
                std::max(2, static_cast<int>(std::lround(sim_t_end / sim_stride)) + 1);
            Trajectory traj = integrate(spec, sim_t_end, n_samples);
            emit_trajectory(spec, traj, format, out);
        } else if (quo->parsed()) {
            NetworkSpec spec = quo_flags.build();
            QuotientMap map = discover_quotient(spec);
            if (format == "json") {
                Json j;
                j["blocks"] = Json::array();
                for (const auto& g : map.groups) {
                    Json b = Json::array();
                    for (int p : g) b.push_back(p + 1);
                    j["blocks"].push_back(b);
                }
                j["sink_block"] = map.sink_block + 1;
                j["effective_J"] = map.effective_J;
                j["fcn_residual"] = map.fcn_residual;
                j["longrange_residual"] = map.longrange_residual;
                if (quo_verify) {
                    EquivalenceReport rep = verify_equivalence(spec, map, quo_t_end);
                    j["max_entrywise_deviation"] = rep.max_entrywise;
                    j["max_env_deviation"] = rep.max_env;
                    j["max_target_deviation"] = rep.max_target;
                }
                out.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
            } else {
                out.write([&](std::ostream& os) {
                    CsvWriter w(os);
                    for (int b = 0; b < map.block_count(); ++b) {
                        std::string line = "block " + std::to_string(b + 1) + ":";
                        for (int p : map.groups[b]) line += " " + std::to_string(p + 1);
                        if (b == map.sink_block) line += " (sink)";
                        w.comment(line);
                    }
                    w.comment("effective_J: " + format_double(map.effective_J));
                    w.comment("fcn_residual: " + format_double(map.fcn_residual));
                    w.comment("longrange_residual: " + format_double(map.longrange_residual));
                    if (quo_verify) {
                        EquivalenceReport rep = verify_equivalence(spec, map, quo_t_end);
                        w.comment("max deviations: entrywise " +
                                  format_double(rep.max_entrywise) + ", env " +
                                  format_double(rep.max_env) + ", target " +
                                  format_double(rep.max_target));
                        w.header({"t", "entrywise_deviation"});
                        for (std::size_t k = 0; k < rep.times.size(); ++k)
                            w.row({rep.times[k], rep.entrywise[k]});
                    } else {
                        w.header({"block", "site"});
                        for (int b = 0; b < map.block_count(); ++b)
                            for (int p : map.groups[b])
                                w.row({double(b + 1), double(p + 1)});
                    }
                });
            }
        } else if (red->parsed()) {
            ReducedSpec spec;
            spec.J = red_J;
            spec.n_c = red_nc;
            spec.rates = {red_gamma, red_gdiss, red_gsink};
            const int n_samples =
                std::max(2, static_cast<int>(std::lround(red_t_end / red_stride)) + 1);
            ReducedTrajectory traj = reduced_integrate(spec, red_t_end, n_samples);
            const std::vector<std::string> cols{"t",      "Gamma_t", "Lambda_N",
                                                "x",      "y",       "rho_NN",
                                                "rho_env", "rho_target"};
            auto row_of = [&](const ReducedState& s) {
                return std::vector<double>{s.t,      s.t * spec.rates.gamma_sink,
                                           s.lambda_n, s.x,
                                           s.y,      s.rho_nn,
                                           s.rho_env, s.rho_target};
            };
            if (format == "json") {
                Json j = Json::array();
                for (const auto& s : traj.samples) {
                    Json rec;
                    auto row = row_of(s);
                    for (std::size_t c = 0; c < cols.size(); ++c) rec[cols[c]] = row[c];
                    j.push_back(rec);
                }
                out.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
            } else {
                out.write([&](std::ostream& os) {
                    CsvWriter w(os);
                    w.header(cols);
                    for (const auto& s : traj.samples) w.row(row_of(s));
                });
            }
        } else if (std_cmd->parsed()) {
            if (st_sweep) {
                std::vector<double> grid;
                for (int i = 0; i < st_points; ++i) {
                    const double f = st_points > 1 ? double(i) / (st_points - 1) : 0.0;
                    grid.push_back(st_log ? st_from * std::pow(st_to / st_from, f)
                                          : st_from + (st_to - st_from) * f);
                }
                out.write([&](std::ostream& os) {
                    CsvWriter w(os);
                    w.header({"gamma", "final_value"});
                    for (double g : grid) {
                        ReducedSpec spec;
                        spec.J = st_J;
                        spec.n_c = st_nc;
                        spec.rates = {g, st_gdiss, st_gsink};
                        w.row({g, final_value(spec)});
                    }
                });
            } else {
                ReducedSpec spec;
                spec.J = st_J;
                spec.n_c = st_nc;
                spec.rates = {st_gamma, st_gdiss, st_gsink};
                FinalValueCheck c = final_value_checked(spec);
                if (format == "json") {
                    Json j{{"final_value", c.closed_form},
                           {"small_s_extrapolation", c.extrapolated},
                           {"crosscheck_residual", c.residual}};
                    out.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
                } else {
                    out.write([&](std::ostream& os) {
                        os << "final_value," << format_double(c.closed_form) << "\n"
                           << "small_s_extrapolation," << format_double(c.extrapolated) << "\n"
                           << "crosscheck_residual," << format_double(c.residual) << "\n";
                    });
                }
            }
        } else if (des->parsed()) {
            SweepRequest req;
            if (des_sweep == "gamma") req.parameter = SweepParameter::gamma;
            else if (des_sweep == "Nc") req.parameter = SweepParameter::n_c;
            else if (des_sweep == "Gamma") req.parameter = SweepParameter::gamma_sink;
            else if (des_sweep == "Gamma-diss") req.parameter = SweepParameter::gamma_diss;
            else throw CLI::ValidationError("--sweep", "expected gamma|Nc|Gamma|Gamma-diss");
            for (int i = 0; i < des_points; ++i) {
                const double f = des_points > 1 ? double(i) / (des_points - 1) : 0.0;
                req.values.push_back(des_log ? des_from * std::pow(des_to / des_from, f)
                                             : des_from + (des_to - des_from) * f);
            }
            if (req.parameter == SweepParameter::n_c) {
                req.values.clear();
                for (int v = static_cast<int>(des_from); v <= static_cast<int>(des_to); ++v)
                    req.values.push_back(v);
            }
            req.fixed_rates = {des_gamma, des_gdiss, des_gsink};
            req.fixed_n_c = des_nc;
            if (des_target_raw > 0) req.absolute_target = des_target_raw;
            req.target_fraction = des_target_frac;
            req.threads = env_threads();
            DesignCurve curve = design_sweep(req);
            if (format == "json") {
                Json j = Json::array();
                for (std::size_t i = 0; i < curve.points.size(); ++i) {
                    const auto& p = curve.points[i];
                    j.push_back({{"swept_value", curve.swept_values[i]},
                                 {"J_star", p.J_solution.value_or(p.best_J)},
                                 {"attainable", p.attainable},
                                 {"best_value", p.best_value},
                                 {"residual", p.residual}});
                }
                out.write([&](std::ostream& os) { os << j.dump(2) << "\n"; });
            } else {
                out.write([&](std::ostream& os) {
                    CsvWriter w(os);
                    w.comment("sweep: " + curve.swept_parameter +
                              ", J* nondecreasing: " +
                              (curve.j_star_nondecreasing ? "yes" : "no"));
                    w.header({"swept_value", "J_star", "attainable", "best_value", "residual"});
                    for (std::size_t i = 0; i < curve.points.size(); ++i) {
                        const auto& p = curve.points[i];
                        w.row({curve.swept_values[i], p.J_solution.value_or(p.best_J),
                               p.attainable ? 1.0 : 0.0, p.best_value, p.residual});
                    }
                });
            }
        } else if (ver->parsed()) {
            verify::Report rep = verify::run_all(ver_filter, env_threads(), ver_negative);
            std::ostringstream os;
            verify::print_report(rep, os);
            out.write([&](std::ostream& o) { o << os.str(); });
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
