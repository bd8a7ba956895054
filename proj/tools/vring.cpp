// vring: axisymmetric Beltrami vortex rings — variational grand-state solver,
// explicit-family oracles, stream-line tracing, and verification suites.
//
// Subcommands: solve, explicit, trace, verify, export.
// Exit codes: 0 ok, 1 I/O, 2 config, 3 verification failure, 4 solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "vring/archive.hpp"
#include "vring/contour.hpp"
#include "vring/dynamics.hpp"
#include "vring/hicks_moffatt.hpp"
#include "vring/model.hpp"
#include "vring/variational.hpp"
#include "vring/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitSolver = 4;

struct RunConfig {
    vring::ProblemParams problem;
    double Z = 8.0, R = 8.0;
    int nz = 257, nr = 257;
    double tol_nehari = 1e-6;
    double tol_energy = 1e-8;
    int max_iter = 500;
    std::vector<double> radii;

    static RunConfig from_json(const ordered_json& j) {
        RunConfig c;
        c.problem.lambda = j.value("lambda", 1.0);
        c.problem.q = j.value("q", 2.0);
        c.problem.W = j.value("W", 2.0);
        c.problem.gamma = j.value("gamma", 0.1);
        c.Z = j.value("Z", 8.0);
        c.R = j.value("R", 8.0);
        c.nz = j.value("nz", 257);
        c.nr = j.value("nr", 257);
        c.tol_nehari = j.value("tol_nehari", 1e-6);
        c.tol_energy = j.value("tol_energy", 1e-8);
        c.max_iter = j.value("max_iter", 500);
        if (j.contains("radii")) c.radii = j.at("radii").get<std::vector<double>>();
        return c;
    }

    ordered_json resolved() const {
        ordered_json j;
        j["lambda"] = problem.lambda;
        j["q"] = problem.q;
        j["W"] = problem.W;
        j["gamma"] = problem.gamma;
        j["Z"] = Z;
        j["R"] = R;
        j["nz"] = nz;
        j["nr"] = nr;
        j["tol_nehari"] = tol_nehari;
        j["tol_energy"] = tol_energy;
        j["max_iter"] = max_iter;
        j["radii"] = radii;
        return j;
    }
};

void print_solution_summary(const vring::StreamSolution& sol) {
    vring::GridField Psi = sol.shifted();
    const vring::AxiGrid& g = sol.grid();
    double l0 = sol.l0();
    double k0 = sol.profile().k0(l0);
    double zmin = 0, zmax = 0, rmin = 0, rmax = 0;
    bool any = false;
    for (int j = 0; j < g.nr; ++j)
        for (int i = 0; i < g.nz; ++i)
            if (Psi(i, j) > 0.0) {
                if (!any) { zmin = zmax = g.z(i); rmin = rmax = g.r(j); any = true; }
                zmin = std::min(zmin, g.z(i)); zmax = std::max(zmax, g.z(i));
                rmin = std::min(rmin, g.r(j)); rmax = std::max(rmax, g.r(j));
            }
    std::cout << "energy " << sol.info.energy << "  nehari_residual " << sol.info.nehari_residual
              << "  iterations " << sol.info.iterations << "\n";
    std::cout << "core_box z [" << zmin << ", " << zmax << "]  r [" << rmin << ", " << rmax
              << "]  l0 " << l0 << "  k0 " << k0 << "\n";
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
    ordered_json j;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config file " << config_path << "\n";
            return kExitIo;
        }
        try {
            in >> j;
        } catch (const std::exception& e) {
            std::cerr << "error: bad config JSON: " << e.what() << "\n";
            return kExitConfig;
        }
    }
    RunConfig cfg = RunConfig::from_json(j);
    try {
        cfg.problem.validate();
        if (!(cfg.Z > 0) || !(cfg.R > 0) || cfg.nz < 9 || cfg.nr < 9)
            throw std::invalid_argument("grid extents must be positive with at least 9 nodes per side");
    } catch (const std::exception& e) {
        std::cerr << "config rejected: " << e.what() << "\n";
        return kExitConfig;
    }
    std::cout << "config " << cfg.resolved().dump() << "\n";
    vring::variational::SolveOptions opts;
    opts.tol_energy = cfg.tol_energy;
    opts.tol_nehari = cfg.tol_nehari;
    opts.max_iter = cfg.max_iter;
    try {
        vring::AxiGrid base(cfg.Z, cfg.R, cfg.nz, cfg.nr);
        if (cfg.radii.empty()) {
            vring::StreamSolution sol = vring::variational::solve_grand_state(cfg.problem, base, opts);
            if (!sol.info.converged) {
                std::cerr << "solver failed: no converged grand state\n";
                return kExitSolver;
            }
            vring::archive::write(out_dir, sol);
            print_solution_summary(sol);
            std::cout << "archive " << out_dir << "\n";
        } else {
            auto sols = vring::variational::continuation_sweep(cfg.problem, cfg.radii, base, opts);
            for (std::size_t k = 0; k < sols.size(); ++k) {
                fs::path dir = fs::path(out_dir) / ("R" + std::to_string(cfg.radii[k]));
                vring::archive::write(dir, sols[k]);
                std::cout << "R = " << cfg.radii[k] << "\n";
                print_solution_summary(sols[k]);
                std::cout << "archive " << dir.string() << "\n";
            }
        }
    } catch (const vring::variational::NehariBracketError& e) {
        std::cerr << "solver failed: " << e.what() << "\n";
        return kExitSolver;
    } catch (const vring::SolverError& e) {
        std::cerr << "solver failed: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_explicit(const std::string& type, double lambda1, double lambda2, double W, double Z,
                 double R, int nz, int nr, const std::string& out_dir) {
    vring::hm::ExplicitStream s;
    try {
        if (type == "hill") {
            if (lambda2 != 0.0) throw std::invalid_argument("hill requires lambda2 = 0");
            s = vring::hm::make_hill(lambda1, W);
        } else if (type == "chandrasekhar") {
            if (lambda1 != 0.0) throw std::invalid_argument("chandrasekhar requires lambda1 = 0");
            s = vring::hm::make_chandrasekhar(lambda2, W);
        } else if (type == "prendergast") {
            if (W != 0.0) throw std::invalid_argument("prendergast requires W = 0");
            s = vring::hm::make_prendergast(lambda1, lambda2);
        } else if (type == "generic") {
            s = vring::hm::make_generic(lambda1, lambda2, W);
        } else {
            throw std::invalid_argument("unknown explicit type '" + type + "'");
        }
        if (!(Z > 0) || !(R > 0) || nz < 9 || nr < 9)
            throw std::invalid_argument("grid extents must be positive with at least 9 nodes per side");
    } catch (const std::exception& e) {
        std::cerr << "config rejected: " << e.what() << "\n";
        return kExitConfig;
    }
    ordered_json cfgj{{"type", type}, {"lambda1", lambda1}, {"lambda2", lambda2}, {"W", W},
                      {"Z", Z},       {"R", R},             {"nz", nz},           {"nr", nr}};
    std::cout << "config " << cfgj.dump() << "\n";
    try {
        vring::AxiGrid g(Z, R, nz, nr);
        vring::StreamSolution sol;
        sol.kind = vring::hm::kind_name(s.kind);
        sol.params = vring::ProblemParams{std::max(s.params.lambda2, 0.0), 1.0, s.params.W, 0.0};
        sol.hm_params = s.params;
        sol.psi = vring::make_field(g, [&](double z, double r) {
            return vring::hm::explicit_psi(s, z, r) + 0.5 * s.params.W * r * r;
        });
        sol.info.converged = true;
        vring::archive::write(out_dir, sol);
        vring::archive::write_fields_csv(fs::path(out_dir) / "fields.csv", sol);
        print_solution_summary(sol);
        std::cout << "archive " << out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_trace(const std::string& archive_dir, int levels, const std::string& out_dir,
              bool export_3d) {
    try {
        vring::StreamSolution sol = vring::archive::read(archive_dir);
        vring::dynamics::Tracer tracer(sol);
        fs::create_directories(out_dir);
        ordered_json diag = ordered_json::array();
        double l0 = tracer.l0();
        for (int k = 1; k <= levels; ++k) {
            double l = l0 * k / (levels + 1.0);
            ordered_json d;
            d["level"] = l;
            try {
                auto orbit = tracer.trace_cross_section(l);
                auto td = tracer.theta_increment(l);
                d["period"] = td.period;
                d["theta_increment"] = td.theta_increment;
                d["rotation_ratio"] = td.rotation_ratio;
                d["classification"] = td.cls.closed ? "closed" : "quasi_periodic";
                if (td.cls.closed) {
                    d["p"] = td.cls.p;
                    d["q_den"] = td.cls.q_den;
                }
                d["drift"] = td.drift;
                fs::path orbit_path = fs::path(out_dir) / ("orbit_" + std::to_string(k) + ".csv");
                std::ofstream oc(orbit_path);
                oc << "tau,z,r,theta\n";
                for (const auto& sm : orbit.samples)
                    oc << vring::archive::format_double(sm.tau) << ','
                       << vring::archive::format_double(sm.z) << ','
                       << vring::archive::format_double(sm.r) << ','
                       << vring::archive::format_double(sm.theta) << '\n';
                if (export_3d) {
                    auto t3 = tracer.trace_streamline_3d(l, {}, true);
                    fs::path p3 = fs::path(out_dir) / ("streamline3d_" + std::to_string(k) + ".csv");
                    std::ofstream o3(p3);
                    o3 << "x,y,z\n";
                    for (const auto& p : t3.polyline)
                        o3 << vring::archive::format_double(p[0]) << ','
                           << vring::archive::format_double(p[1]) << ','
                           << vring::archive::format_double(p[2]) << '\n';
                }
            } catch (const std::exception& e) {
                d["skipped"] = e.what();
            }
            diag.push_back(d);
        }
        std::ofstream dj(fs::path(out_dir) / "diagnostics.json");
        dj << ordered_json{{"l0", l0}, {"levels", diag}}.dump(2) << "\n";
        std::cout << "trace: " << levels << " levels, l0 " << l0 << ", output " << out_dir << "\n";
    } catch (const vring::archive::ArchiveError& e) {
        std::cerr << "archive error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_verify(const std::string& archive_dir, const std::string& suite_name,
               const std::string& out_dir) {
    vring::verify::Suite suite;
    try {
        suite = vring::verify::suite_from_name(suite_name);
    } catch (const std::exception& e) {
        std::cerr << "config rejected: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        vring::StreamSolution sol = vring::archive::read(archive_dir);
        vring::verify::VerificationReport rep = vring::verify::run_suite(sol, suite);
        std::cout << rep.to_text();
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            std::ofstream rj(fs::path(out_dir) / "report.json");
            rj << rep.to_json().dump(2) << "\n";
            std::ofstream rt(fs::path(out_dir) / "report.txt");
            rt << rep.to_text();
        }
        return rep.all_pass() ? kExitOk : kExitVerify;
    } catch (const vring::archive::ArchiveError& e) {
        std::cerr << "archive error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

int cmd_export(const std::string& archive_dir, const std::string& format,
               const std::string& out_dir) {
    if (format != "csv" && format != "json" && format != "vtk") {
        std::cerr << "config rejected: unknown format '" << format << "'\n";
        return kExitConfig;
    }
    try {
        vring::StreamSolution sol = vring::archive::read(archive_dir);
        fs::create_directories(out_dir);
        if (format == "csv") {
            vring::archive::write_fields_csv(fs::path(out_dir) / "fields.csv", sol);
            std::cout << "wrote " << (fs::path(out_dir) / "fields.csv").string() << "\n";
        } else if (format == "vtk") {
            vring::archive::write_vtk(fs::path(out_dir) / "fields.vtk", sol);
            std::cout << "wrote " << (fs::path(out_dir) / "fields.vtk").string() << "\n";
        } else {
            auto [imp, circ] = vring::verify::impulse_circulation(sol);
            ordered_json j = vring::archive::header_json(sol);
            j["derived"] = {{"l0", sol.l0()},
                            {"k0", sol.profile().k0(sol.l0())},
                            {"impulse", imp},
                            {"circulation", circ}};
            std::ofstream out(fs::path(out_dir) / "summary.json");
            out << j.dump(2) << "\n";
            std::cout << "wrote " << (fs::path(out_dir) / "summary.json").string() << "\n";
        }
    } catch (const vring::archive::ArchiveError& e) {
        std::cerr << "archive error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"axisymmetric Beltrami vortex rings: solver, oracles, tracing, verification"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", archive_dir, suite = "all", format = "csv";
    std::string type = "chandrasekhar";
    double lambda1 = 0.0, lambda2 = 1.0, W = 1.0, Z = 4.0, R = 4.0;
    int nz = 257, nr = 257, levels = 10;
    bool export_3d = false;

    auto* solve = app.add_subcommand("solve", "variational grand-state solve from a JSON config");
    solve->add_option("--config", config_path, "config JSON path")->required();
    solve->add_option("--out", out_dir, "output archive directory");

    auto* expl = app.add_subcommand("explicit", "sample an explicit vortex of the three-parameter family");
    expl->add_option("--type", type, "generic|hill|chandrasekhar|prendergast");
    expl->add_option("--lambda1", lambda1, "Bernoulli strength");
    expl->add_option("--lambda2", lambda2, "swirl strength");
    expl->add_option("--W", W, "ring speed");
    expl->add_option("--grid-Z", Z, "half-extent in z");
    expl->add_option("--grid-R", R, "extent in r");
    expl->add_option("--nz", nz, "nodes in z");
    expl->add_option("--nr", nr, "nodes in r");
    expl->add_option("--out", out_dir, "output archive directory");

    auto* trace = app.add_subcommand("trace", "trace invariant tori of an archived solution");
    trace->add_option("--archive", archive_dir, "archive directory")->required();
    trace->add_option("--levels", levels, "number of stream levels in (0, l0)");
    trace->add_option("--out", out_dir, "output directory");
    trace->add_flag("--export-3d", export_3d, "also export 3d stream-line polylines");

    auto* verify = app.add_subcommand("verify", "run a verification suite on an archive");
    verify->add_option("--archive", archive_dir, "archive directory")->required();
    verify->add_option("--suite", suite, "identities|topology|bounds|beltrami|all");
    verify->add_option("--out", out_dir, "report output directory");

    auto* expo = app.add_subcommand("export", "export an archive to csv/json/vtk");
    expo->add_option("--archive", archive_dir, "archive directory")->required();
    expo->add_option("--format", format, "csv|json|vtk");
    expo->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (expl->parsed()) return cmd_explicit(type, lambda1, lambda2, W, Z, R, nz, nr, out_dir);
    if (trace->parsed()) return cmd_trace(archive_dir, levels, out_dir, export_3d);
    if (verify->parsed()) return cmd_verify(archive_dir, suite, out_dir);
    if (expo->parsed()) return cmd_export(archive_dir, format, out_dir);
    return kExitConfig;
}
