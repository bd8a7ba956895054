#pragma once

// Solution archive: a directory holding header.json (parameters, grid,
// solver metadata) and psi.csv (node list z,r,psi). One format serves the
// solver and the explicit oracle family, so verification and tracing are
// source-agnostic. CSV numbers use the shortest round-trip decimal form.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "vring/fields.hpp"
#include "vring/grid.hpp"
#include "vring/model.hpp"

namespace vring::archive {

struct ArchiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ArchiveError("bad numeric field: '" + s + "'");
    return x;
}

inline nlohmann::ordered_json header_json(const StreamSolution& sol) {
    nlohmann::ordered_json h;
    h["format"] = "vring-archive";
    h["version"] = 1;
    h["kind"] = sol.kind;
    h["problem"] = {{"lambda", sol.params.lambda},
                    {"q", sol.params.q},
                    {"W", sol.params.W},
                    {"gamma", sol.params.gamma}};
    h["grid"] = {{"Z", sol.grid().Z}, {"R", sol.grid().R}, {"nz", sol.grid().nz}, {"nr", sol.grid().nr}};
    h["solver"] = {{"energy", sol.info.energy},
                   {"nehari_residual", sol.info.nehari_residual},
                   {"iterations", sol.info.iterations},
                   {"converged", sol.info.converged},
                   {"fixed_point_residual", sol.info.fixed_point_residual},
                   {"core_fits", sol.info.core_fits}};
    if (sol.hm_params) {
        h["hicks_moffatt"] = {{"lambda1", sol.hm_params->lambda1},
                              {"lambda2", sol.hm_params->lambda2},
                              {"W", sol.hm_params->W},
                              {"kappa", sol.hm_params->kappa},
                              {"a", sol.hm_params->a}};
    }
    h["fields"] = {"psi"};
    return h;
}

inline void write(const std::filesystem::path& dir, const StreamSolution& sol) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ArchiveError("cannot create archive directory " + dir.string());
    {
        std::ofstream out(dir / "header.json");
        if (!out) throw ArchiveError("cannot write " + (dir / "header.json").string());
        out << header_json(sol).dump(2) << "\n";
    }
    {
        std::ofstream out(dir / "psi.csv");
        if (!out) throw ArchiveError("cannot write " + (dir / "psi.csv").string());
        out << "z,r,psi\n";
        const AxiGrid& g = sol.grid();
        for (int j = 0; j < g.nr; ++j)
            for (int i = 0; i < g.nz; ++i)
                out << format_double(g.z(i)) << ',' << format_double(g.r(j)) << ','
                    << format_double(sol.psi(i, j)) << '\n';
    }
}

inline StreamSolution read(const std::filesystem::path& dir) {
    std::ifstream hin(dir / "header.json");
    if (!hin) throw ArchiveError("cannot open " + (dir / "header.json").string());
    nlohmann::ordered_json h;
    try {
        hin >> h;
    } catch (const std::exception& e) {
        throw ArchiveError("bad header.json: " + std::string(e.what()));
    }
    if (h.value("format", "") != "vring-archive") throw ArchiveError("not a vring archive: " + dir.string());
    StreamSolution sol;
    sol.kind = h.at("kind").get<std::string>();
    sol.params.lambda = h.at("problem").at("lambda").get<double>();
    sol.params.q = h.at("problem").at("q").get<double>();
    sol.params.W = h.at("problem").at("W").get<double>();
    sol.params.gamma = h.at("problem").at("gamma").get<double>();
    AxiGrid g(h.at("grid").at("Z").get<double>(), h.at("grid").at("R").get<double>(),
              h.at("grid").at("nz").get<int>(), h.at("grid").at("nr").get<int>());
    sol.psi = GridField(g);
    if (h.contains("solver")) {
        const auto& s = h.at("solver");
        sol.info.energy = s.value("energy", 0.0);
        sol.info.nehari_residual = s.value("nehari_residual", 0.0);
        sol.info.iterations = s.value("iterations", 0);
        sol.info.converged = s.value("converged", false);
        sol.info.fixed_point_residual = s.value("fixed_point_residual", 0.0);
        sol.info.core_fits = s.value("core_fits", false);
    }
    if (h.contains("hicks_moffatt")) {
        const auto& m = h.at("hicks_moffatt");
        hm::HicksMoffattParams p;
        p.lambda1 = m.at("lambda1").get<double>();
        p.lambda2 = m.at("lambda2").get<double>();
        p.W = m.at("W").get<double>();
        p.kappa = m.at("kappa").get<double>();
        p.a = m.at("a").get<double>();
        sol.hm_params = p;
    }
    std::ifstream in(dir / "psi.csv");
    if (!in) throw ArchiveError("cannot open " + (dir / "psi.csv").string());
    std::string line;
    std::getline(in, line);
    if (line != "z,r,psi") throw ArchiveError("bad psi.csv header: '" + line + "'");
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ArchiveError("bad psi.csv row: '" + line + "'");
        if (count >= g.size()) throw ArchiveError("psi.csv has more rows than grid nodes");
        sol.psi.v[count] = parse_double(line.substr(c2 + 1));
        ++count;
    }
    if (count != g.size()) throw ArchiveError("psi.csv row count mismatch");
    return sol;
}

// Legacy-ASCII VTK structured grid of the stream function and reconstructed
// velocity/vorticity/factor fields, for external visualization.
inline void write_vtk(const std::filesystem::path& path, const StreamSolution& sol) {
    fields::VelocityField vf = fields::reconstruct(sol);
    const AxiGrid& g = sol.grid();
    std::ofstream out(path);
    if (!out) throw ArchiveError("cannot write " + path.string());
    out << "# vtk DataFile Version 3.0\n";
    out << "axisymmetric stream solution (z, r) cross section\n";
    out << "ASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.nz << ' ' << g.nr << " 1\n";
    out << "ORIGIN " << format_double(-g.Z) << " 0 0\n";
    out << "SPACING " << format_double(g.hz()) << ' ' << format_double(g.hr()) << " 1\n";
    out << "POINT_DATA " << g.size() << "\n";
    auto scalar = [&](const char* name, const GridField& f) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int j = 0; j < g.nr; ++j)
            for (int i = 0; i < g.nz; ++i) out << format_double(f(i, j)) << '\n';
    };
    scalar("psi", sol.psi);
    scalar("Psi", vf.Psi);
    scalar("u_r", vf.u_r);
    scalar("u_theta", vf.u_theta);
    scalar("u_z", vf.u_z);
    scalar("omega_r", vf.omega_r);
    scalar("omega_theta", vf.omega_theta);
    scalar("omega_z", vf.omega_z);
    scalar("factor", vf.f);
}

// Generic CSV of named node columns.
inline void write_fields_csv(const std::filesystem::path& path, const StreamSolution& sol) {
    fields::VelocityField vf = fields::reconstruct(sol);
    const AxiGrid& g = sol.grid();
    std::ofstream out(path);
    if (!out) throw ArchiveError("cannot write " + path.string());
    out << "z,r,psi,Psi,u_r,u_theta,u_z,omega_r,omega_theta,omega_z,factor\n";
    for (int j = 0; j < g.nr; ++j)
        for (int i = 0; i < g.nz; ++i) {
            out << format_double(g.z(i)) << ',' << format_double(g.r(j)) << ','
                << format_double(sol.psi(i, j)) << ',' << format_double(vf.Psi(i, j)) << ','
                << format_double(vf.u_r(i, j)) << ',' << format_double(vf.u_theta(i, j)) << ','
                << format_double(vf.u_z(i, j)) << ',' << format_double(vf.omega_r(i, j)) << ','
                << format_double(vf.omega_theta(i, j)) << ',' << format_double(vf.omega_z(i, j)) << ','
                << format_double(vf.f(i, j)) << '\n';
        }
}

}  // namespace vring::archive
