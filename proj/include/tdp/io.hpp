#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdp/grid.hpp"
#include "tdp/hamiltonian.hpp"

namespace tdp {

inline constexpr int kSchemaVersion = 1;

// Long format with header "t,x,V1", one row per (t, x), t outer.
void write_potential_csv(const std::string& path, const PotentialField& V, const std::vector<double>& ts,
                         const std::vector<double>& xs);
std::vector<std::array<double, 3>> read_potential_csv(const std::string& path);

// Header "x,re,im,density".
void write_mode_csv(const std::string& path, const GridFunction& psi);
// Header "t,x,re,im,density".
void write_trajectory_csv(const std::string& path, const std::vector<GridFunction>& snapshots);

// Writes the report with "schema_version" set, pretty-printed.
void write_json(const std::string& path, nlohmann::json report);

}  // namespace tdp
