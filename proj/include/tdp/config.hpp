#pragma once

#include <map>
#include <memory>
#include <string>

#include "tdp/ermakov.hpp"
#include "tdp/painleve.hpp"

namespace tdp {

// Plain-text run configuration, one `key = value` per line, `#` comments.
//
//   frequency.type      constant | tanh | table
//   frequency.omega2    constant Omega^2                    (constant)
//   frequency.omega1, frequency.omega2, frequency.slope     (tanh: 4 Omega^2 = omega1 + omega2 tanh(slope t))
//   frequency.file      two-column CSV (t, Omega^2)         (table, relative to the config file)
//   ermakov.a, ermakov.c, ermakov.sign_b (+1 | -1), ermakov.t0
//   ermakov.t_min, ermakov.t_max    window of validity
//   hierarchy.type      riccati | erfc | pseudo_hermite | okamoto | nonlinear_bound
//   hierarchy.lambda    > 0
//   hierarchy.gamma     riccati only
//   hierarchy.mu, hierarchy.ka, hierarchy.kb                (riccati)
//   hierarchy.k         erfc, nonlinear_bound
//   hierarchy.N, hierarchy.M
//   grid.points         default 4096
//   grid.y_window       |sqrt(lambda) x / sigma| covered at every time; default per hierarchy
//   time.start, time.end, time.samples                      sampling for potential and mode output
//   potential.points    x samples of the potential surface, default 201
//   modes.count         states per ladder sequence, default 4
//   propagate.mode      index into the zero-mode list, default: highest Lambda
//   propagate.dt, propagate.snapshots
//   verify.tol          eigen-residual tolerance, default 1e-6
//   output.dir
struct RunConfig {
    FrequencyProfile frequency = ConstantFrequency{1.0};
    double a = 2.0, c = 1.0;
    int sign_b = +1;
    double t0 = 0.0, t_min = -0.1, t_max = 3.3;

    Hierarchy hierarchy;

    int grid_points = 4096;
    double y_window = 0.0;  // 0: hierarchy default

    double t_start = 0.0, t_end = 1.5707963267948966;
    int time_samples = 41;
    int potential_points = 201;
    int mode_count = 4;
    int propagate_mode = -1;
    double propagate_dt = 1e-4;
    int snapshots = 11;
    double tol = 1e-6;
    std::string out_dir = "out";
    std::string source;  // path the config was read from

    // Builds and validates every derived object; ConstraintError on failure.
    std::shared_ptr<const ErmakovSolution> ermakov() const;
    PainleveSolution painleve() const;
    double window_y() const;
};

// Parses the text; `base_dir` resolves relative file paths.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
// Raw key/value pairs of a config text.
std::map<std::string, std::string> parse_key_values(const std::string& text);
// Canonical key = value rendering.
std::string render_config(const RunConfig& cfg);

}  // namespace tdp
