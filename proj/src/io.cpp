#include "tdp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out.precision(17);
    return out;
}

}  // namespace

void write_potential_csv(const std::string& path, const PotentialField& V, const std::vector<double>& ts,
                         const std::vector<double>& xs) {
    auto out = open_out(path);
    out << "t,x,V1\n";
    for (double t : ts)
        for (double x : xs) out << t << ',' << x << ',' << V.V1(x, t) << '\n';
}

std::vector<std::array<double, 3>> read_potential_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open potential file " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,V1", 0) != 0)
        throw DomainError(path + ": expected header t,x,V1");
    std::vector<std::array<double, 3>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<double, 3> r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r[0], &r[1], &r[2]) != 3)
            throw DomainError(path + ": malformed row " + std::to_string(lineno));
        rows.push_back(r);
    }
    return rows;
}

void write_mode_csv(const std::string& path, const GridFunction& psi) {
    auto out = open_out(path);
    out << "x,re,im,density\n";
    for (int j = 0; j < psi.grid.n; ++j)
        out << psi.grid.x(j) << ',' << psi.v[j].real() << ',' << psi.v[j].imag() << ',' << std::norm(psi.v[j]) << '\n';
}

void write_trajectory_csv(const std::string& path, const std::vector<GridFunction>& snapshots) {
    auto out = open_out(path);
    out << "t,x,re,im,density\n";
    for (const auto& p : snapshots)
        for (int j = 0; j < p.grid.n; ++j)
            out << p.t << ',' << p.grid.x(j) << ',' << p.v[j].real() << ',' << p.v[j].imag() << ','
                << std::norm(p.v[j]) << '\n';
}

void write_json(const std::string& path, nlohmann::json report) {
    report["schema_version"] = kSchemaVersion;
    auto out = open_out(path);
    out << report.dump(2) << '\n';
}

}  // namespace tdp
