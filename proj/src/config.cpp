#include "tdp/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tdp/errors.hpp"
#include "tdp/invariant.hpp"

namespace tdp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || !std::isfinite(d))
        throw DomainError("config: " + key + " expects a finite number, got '" + v + "'");
    return d;
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw DomainError("config: " + key + " expects an integer, got '" + v + "'");
    return static_cast<int>(d);
}

// Accepts "0.44/sqrt(6)"-style values as well as plain numbers.
double to_value(const std::string& key, const std::string& v) {
    const auto slash = v.find('/');
    if (slash == std::string::npos) return to_double(key, v);
    const std::string num = trim(v.substr(0, slash)), den = trim(v.substr(slash + 1));
    double d;
    if (den.rfind("sqrt(", 0) == 0 && den.back() == ')')
        d = std::sqrt(to_double(key, trim(den.substr(5, den.size() - 6))));
    else
        d = to_double(key, den);
    if (d == 0.0) throw DomainError("config: " + key + " divides by zero");
    return to_double(key, num) / d;
}

const std::set<std::string> kKeys = {
    "frequency.type", "frequency.omega2", "frequency.omega1", "frequency.slope", "frequency.file",
    "ermakov.a", "ermakov.c", "ermakov.sign_b", "ermakov.t0", "ermakov.t_min", "ermakov.t_max",
    "hierarchy.type", "hierarchy.lambda", "hierarchy.gamma", "hierarchy.mu", "hierarchy.ka", "hierarchy.kb",
    "hierarchy.k", "hierarchy.N", "hierarchy.M",
    "grid.points", "grid.y_window",
    "time.start", "time.end", "time.samples",
    "potential.points", "modes.count",
    "propagate.mode", "propagate.dt", "propagate.snapshots",
    "verify.tol", "output.dir"};

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!kKeys.count(key)) throw DomainError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (val.empty()) throw DomainError("config line " + std::to_string(lineno) + ": empty value for " + key);
        if (kv.count(key)) throw DomainError("config line " + std::to_string(lineno) + ": duplicate key " + key);
        kv[key] = val;
    }
    return kv;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    const auto kv = parse_key_values(text);
    auto has = [&](const std::string& k) { return kv.count(k) > 0; };
    auto num = [&](const std::string& k, double def) { return has(k) ? to_value(k, kv.at(k)) : def; };
    auto integer = [&](const std::string& k, int def) { return has(k) ? to_int(k, kv.at(k)) : def; };
    auto str = [&](const std::string& k, const std::string& def) { return has(k) ? kv.at(k) : def; };
    auto require = [&](const std::string& k, const std::string& why) {
        if (!has(k)) throw DomainError("config: " + k + " is required " + why);
    };

    RunConfig c;
    const std::string ft = str("frequency.type", "constant");
    if (ft == "constant") {
        c.frequency = ConstantFrequency{num("frequency.omega2", 1.0)};
    } else if (ft == "tanh") {
        for (const char* k : {"frequency.omega1", "frequency.omega2", "frequency.slope"}) require(k, "for a tanh profile");
        c.frequency = TanhFrequency{num("frequency.omega1", 0), num("frequency.omega2", 0), num("frequency.slope", 0)};
    } else if (ft == "table") {
        require("frequency.file", "for a tabulated profile");
        std::filesystem::path p = kv.at("frequency.file");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        c.frequency = load_frequency_csv(p.string());
    } else {
        throw DomainError("config: frequency.type must be constant, tanh or table (got '" + ft + "')");
    }
    validate(c.frequency);

    c.a = num("ermakov.a", c.a);
    c.c = num("ermakov.c", c.c);
    c.sign_b = integer("ermakov.sign_b", c.sign_b);
    if (c.sign_b != 1 && c.sign_b != -1) throw DomainError("config: ermakov.sign_b must be +1 or -1");
    c.t0 = num("ermakov.t0", c.t0);
    c.t_start = num("time.start", c.t_start);
    c.t_end = num("time.end", c.t_end);
    c.t_min = num("ermakov.t_min", std::min(c.t_start, c.t0) - 0.1);
    c.t_max = num("ermakov.t_max", std::max(c.t_end, c.t0) + 0.1);
    if (!(c.t_min < c.t_max)) throw DomainError("config: ermakov.t_min must be below ermakov.t_max");
    if (!(c.t_start <= c.t_end)) throw DomainError("config: time.start must not exceed time.end");
    if (c.t_start < c.t_min || c.t_end > c.t_max)
        throw DomainError("config: time.start/time.end must lie inside [ermakov.t_min, ermakov.t_max]");

    const double lambda = num("hierarchy.lambda", 1.0);
    if (!(lambda > 0.0)) throw DomainError("config: hierarchy.lambda must be positive");
    require("hierarchy.type", "");
    const std::string ht = kv.at("hierarchy.type");
    HierarchyVariant v;
    double gamma = 0.0;
    if (ht == "riccati") {
        const int mu = integer("hierarchy.mu", -1);
        v = RiccatiGeneral{mu, num("hierarchy.ka", 1.0), num("hierarchy.kb", 0.0)};
        gamma = num("hierarchy.gamma", 0.0);
    } else if (ht == "erfc") {
        require("hierarchy.k", "for the erfc hierarchy");
        v = Erfc{num("hierarchy.k", 0)};
    } else if (ht == "pseudo_hermite") {
        require("hierarchy.N", "for the pseudo-Hermite hierarchy");
        v = PseudoHermite{integer("hierarchy.N", 0)};
    } else if (ht == "okamoto") {
        require("hierarchy.M", "for the Okamoto hierarchy");
        v = Okamoto{integer("hierarchy.M", 0)};
    } else if (ht == "nonlinear_bound") {
        require("hierarchy.N", "for the nonlinear bound-state hierarchy");
        require("hierarchy.k", "for the nonlinear bound-state hierarchy");
        v = NonlinearBound{integer("hierarchy.N", 0), num("hierarchy.k", 0)};
    } else {
        throw DomainError("config: hierarchy.type must be riccati, erfc, pseudo_hermite, okamoto or nonlinear_bound");
    }
    if (ht != "riccati" && has("hierarchy.gamma"))
        throw DomainError("config: hierarchy.gamma is fixed by the " + ht + " hierarchy; remove it");
    c.hierarchy = Hierarchy{v, physical_params(v, lambda, gamma)};

    c.grid_points = integer("grid.points", c.grid_points);
    if (c.grid_points < 16) throw DomainError("config: grid.points must be at least 16");
    c.y_window = num("grid.y_window", 0.0);
    if (c.y_window < 0.0) throw DomainError("config: grid.y_window must be positive");
    c.time_samples = integer("time.samples", c.time_samples);
    if (c.time_samples < 1) throw DomainError("config: time.samples must be at least 1");
    c.potential_points = integer("potential.points", c.potential_points);
    if (c.potential_points < 2) throw DomainError("config: potential.points must be at least 2");
    c.mode_count = integer("modes.count", c.mode_count);
    if (c.mode_count < 1) throw DomainError("config: modes.count must be at least 1");
    c.propagate_mode = integer("propagate.mode", c.propagate_mode);
    c.propagate_dt = num("propagate.dt", c.propagate_dt);
    if (!(c.propagate_dt > 0.0)) throw DomainError("config: propagate.dt must be positive");
    c.snapshots = integer("propagate.snapshots", c.snapshots);
    if (c.snapshots < 2) throw DomainError("config: propagate.snapshots must be at least 2");
    c.tol = num("verify.tol", c.tol);
    if (!(c.tol > 0.0)) throw DomainError("config: verify.tol must be positive");
    c.out_dir = str("output.dir", c.out_dir);

    // Fail early on anything the downstream constructors reject.
    c.painleve();
    c.ermakov();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c = parse_config(ss.str(), std::filesystem::path(path).parent_path().string().empty()
                                             ? "."
                                             : std::filesystem::path(path).parent_path().string());
    c.source = path;
    return c;
}

std::shared_ptr<const ErmakovSolution> RunConfig::ermakov() const {
    return std::make_shared<const ErmakovSolution>(
        make_ermakov(solve_linear_basis(frequency, t0, {t_min, t_max}), a, c, sign_b));
}

PainleveSolution RunConfig::painleve() const { return make_solution(hierarchy); }

double RunConfig::window_y() const { return y_window > 0.0 ? y_window : hierarchy_y_window(hierarchy); }

std::string render_config(const RunConfig& cfg) {
    std::ostringstream o;
    o.precision(17);
    if (auto c = std::get_if<ConstantFrequency>(&cfg.frequency)) {
        o << "frequency.type = constant\nfrequency.omega2 = " << c->omega2 << "\n";
    } else if (auto t = std::get_if<TanhFrequency>(&cfg.frequency)) {
        o << "frequency.type = tanh\nfrequency.omega1 = " << t->omega1 << "\nfrequency.omega2 = " << t->omega2
          << "\nfrequency.slope = " << t->slope << "\n";
    } else {
        o << "# frequency.type = table (samples not rendered)\n";
    }
    o << "ermakov.a = " << cfg.a << "\nermakov.c = " << cfg.c << "\nermakov.sign_b = " << cfg.sign_b
      << "\nermakov.t0 = " << cfg.t0 << "\nermakov.t_min = " << cfg.t_min << "\nermakov.t_max = " << cfg.t_max << "\n";
    const auto& h = cfg.hierarchy;
    o << "hierarchy.lambda = " << h.phys.lambda << "\n";
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RiccatiGeneral>)
                o << "hierarchy.type = riccati\nhierarchy.mu = " << v.mu << "\nhierarchy.ka = " << v.ka
                  << "\nhierarchy.kb = " << v.kb << "\nhierarchy.gamma = " << h.phys.gamma << "\n";
            else if constexpr (std::is_same_v<T, Erfc>)
                o << "hierarchy.type = erfc\nhierarchy.k = " << v.k << "\n";
            else if constexpr (std::is_same_v<T, PseudoHermite>)
                o << "hierarchy.type = pseudo_hermite\nhierarchy.N = " << v.N << "\n";
            else if constexpr (std::is_same_v<T, Okamoto>)
                o << "hierarchy.type = okamoto\nhierarchy.M = " << v.M << "\n";
            else
                o << "hierarchy.type = nonlinear_bound\nhierarchy.N = " << v.N << "\nhierarchy.k = " << v.k << "\n";
        },
        h.variant);
    o << "grid.points = " << cfg.grid_points << "\n";
    if (cfg.y_window > 0.0) o << "grid.y_window = " << cfg.y_window << "\n";
    o << "time.start = " << cfg.t_start << "\ntime.end = " << cfg.t_end << "\ntime.samples = " << cfg.time_samples
      << "\npotential.points = " << cfg.potential_points << "\nmodes.count = " << cfg.mode_count
      << "\npropagate.mode = " << cfg.propagate_mode << "\npropagate.dt = " << cfg.propagate_dt
      << "\npropagate.snapshots = " << cfg.snapshots << "\nverify.tol = " << cfg.tol << "\noutput.dir = " << cfg.out_dir
      << "\n";
    return o.str();
}

}  // namespace tdp
