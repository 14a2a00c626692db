#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "tdp/config.hpp"
#include "tdp/errors.hpp"
#include "tdp/io.hpp"

using namespace tdp;
namespace fs = std::filesystem;

namespace {

const std::string kCli = TDP_CLI_PATH;
const std::string kConfigs = TDP_CONFIG_DIR;

fs::path scratch() {
    static const fs::path p = [] {
        fs::path d = fs::temp_directory_path() / ("tdp_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return p;
}

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > " + (scratch() / "last.log").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_log() {
    std::ifstream in(scratch() / "last.log");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

std::string cfg(const std::string& name) { return kConfigs + "/" + name; }

fs::path write_text(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

const char* kErfc = R"(
frequency.type = constant
frequency.omega2 = 1
ermakov.a = 2
ermakov.c = 1
hierarchy.type = erfc
hierarchy.k = 0.3
time.end = 0.3
)";

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(kErfc);
    CHECK(std::get<Erfc>(c.hierarchy.variant).k == 0.3);
    CHECK(c.grid_points == 4096);
    CHECK(c.t_end == 0.3);
    CHECK(c.t_max > c.t_end);

    const RunConfig nb = parse_config("hierarchy.type = nonlinear_bound\nhierarchy.N = 3\nhierarchy.k = 0.44/sqrt(6)\n");
    CHECK(std::get<NonlinearBound>(nb.hierarchy.variant).k == doctest::Approx(0.44 / std::sqrt(6.0)));

    const RunConfig again = parse_config(render_config(c));
    CHECK(render_config(again) == render_config(c));

    CHECK_THROWS_AS(parse_config("hierarchy.type = erfc\nhierarchy.k = 0.3\nbogus = 1\n"), DomainError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = erfc\nhierarchy.k = abc\n"), DomainError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = erfc\n"), DomainError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = erfc\nhierarchy.k = 0.3\nhierarchy.k = 0.2\n"), DomainError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = erfc\nhierarchy.k = 0.3\nhierarchy.gamma = 1\n"), DomainError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = okamoto\nhierarchy.M = 0\n"), DomainError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = erfc\nhierarchy.k = 0.3\nermakov.a = -1\n"), ConstraintError);
    CHECK_THROWS_AS(parse_config("hierarchy.type = nonlinear_bound\nhierarchy.N = 3\nhierarchy.k = 0.3\n"), BranchError);
    CHECK_THROWS_AS(parse_config("frequency.type = tanh\nhierarchy.type = erfc\nhierarchy.k = 0.3\n"), DomainError);
}

TEST_CASE("shipped configs verify") {
    for (const char* name : {"okamoto_m2.cfg", "nonlinear_bound_n3.cfg", "riccati_mu_plus.cfg", "erfc.cfg"}) {
        const fs::path out = scratch() / ("verify_" + std::string(name));
        INFO(name);
        CHECK(run("verify --config " + cfg(name) + " --out " + out.string()) == 0);
        const auto r = read_json(out / "verify.json");
        CHECK(r["schema_version"] == kSchemaVersion);
        CHECK(r["pass"] == true);
        CHECK(r["checks"].size() >= 5);
    }
}

TEST_CASE("potential surface round trip") {
    const fs::path out = scratch() / "potential";
    REQUIRE(run("potential --config " + cfg("okamoto_m2.cfg") + " --out " + out.string()) == 0);
    const auto rows = read_potential_csv((out / "potential.csv").string());
    CHECK(rows.size() == 41u * 201u);
    const auto r = read_json(out / "potential.json");
    CHECK(r["pass"] == true);
    CHECK(run("verify --config " + cfg("okamoto_m2.cfg") + " --out " + out.string() + " --potential " +
              (out / "potential.csv").string()) == 0);
    const auto v = read_json(out / "verify.json");
    bool found = false;
    for (const auto& c : v["checks"])
        if (c["name"] == "potential_file") found = c["pass"] == true;
    CHECK(found);

    // A tampered surface fails the re-verification.
    std::ostringstream text;
    text.precision(17);
    text << "t,x,V1\n";
    for (size_t i = 0; i < rows.size(); ++i)
        text << rows[i][0] << ',' << rows[i][1] << ',' << (i == 100 ? rows[i][2] + 1e-6 : rows[i][2]) << '\n';
    const fs::path bad = write_text("tampered.csv", text.str());
    CHECK(run("verify --config " + cfg("okamoto_m2.cfg") + " --out " + out.string() + " --potential " + bad.string()) ==
          3);

    const fs::path mu = scratch() / "mu_plus";
    CHECK(run("potential --config " + cfg("riccati_mu_plus.cfg") + " --out " + mu.string()) == 0);
}

TEST_CASE("modes report") {
    const fs::path out = scratch() / "modes";
    REQUIRE(run("modes --config " + cfg("okamoto_m2.cfg") + " --out " + out.string()) == 0);
    const auto r = read_json(out / "modes.json");
    REQUIRE(r["zero_modes"].size() == 3);
    const double lam = 2.5;
    const int nodes[] = {0, 3, 4};
    const double Lam[] = {0.0, 14 * lam / 3, 16 * lam / 3};
    for (int i = 0; i < 3; ++i) {
        CHECK(r["zero_modes"][i]["nodes"] == nodes[i]);
        CHECK(r["zero_modes"][i]["Lambda"].get<double>() == doctest::Approx(Lam[i]).epsilon(1e-12));
        CHECK(fs::exists(out / r["zero_modes"][i]["file"].get<std::string>()));
    }

    const fs::path nb = scratch() / "modes_nb";
    REQUIRE(run("modes --config " + cfg("nonlinear_bound_n3.cfg") + " --out " + nb.string()) == 0);
    const auto s = read_json(nb / "modes.json");
    std::vector<double> spectrum;
    for (const auto& seq : s["sequences"])
        for (const auto& st : seq["states"]) spectrum.push_back(st["Lambda"].get<double>());
    std::sort(spectrum.begin(), spectrum.end());
    REQUIRE(spectrum.size() >= 7);
    for (int n = 0; n <= 6; ++n) CHECK(spectrum[n] == doctest::Approx(2.0 * n).epsilon(1e-12));
    CHECK(s["sequences"][0]["terminated"] == true);

    const fs::path ef = scratch() / "modes_erfc";
    REQUIRE(run("modes --config " + cfg("erfc.cfg") + " --out " + ef.string()) == 0);
    const auto e = read_json(ef / "modes.json");
    REQUIRE(e["zero_modes"].size() == 2);
    CHECK(e["zero_modes"][0]["kind"] == "both");
    CHECK(e["zero_modes"][1]["Lambda"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("propagation and oscillator commands") {
    const fs::path c = write_text("short.cfg", kErfc);
    const fs::path out = scratch() / "prop";
    CHECK(run("propagate --config " + c.string() + " --out " + out.string()) == 0);
    const auto r = read_json(out / "propagate.json");
    CHECK(r["pass"] == true);
    CHECK(r["mode"]["Lambda"].get<double>() == doctest::Approx(2.0));
    CHECK(fs::exists(out / "trajectory.csv"));
    CHECK(run("propagate --config " + c.string() + " --out " + out.string() + " --mode 7") == 2);

    const fs::path osc = scratch() / "osc";
    CHECK(run("oscillator --config " + c.string() + " --out " + osc.string() + " --grid-points 2048") == 0);
    CHECK(read_json(osc / "oscillator.json")["pass"] == true);
}

TEST_CASE("exit codes") {
    const fs::path out = scratch() / "errors";
    const fs::path bad_k = write_text("bad_k.cfg", "hierarchy.type = nonlinear_bound\nhierarchy.N = 3\nhierarchy.k = 0.6\n");
    CHECK(run("verify --config " + bad_k.string() + " --out " + out.string()) == 2);
    CHECK(last_log().find("exceeds") != std::string::npos);

    CHECK(run("verify --config " + cfg("erfc.cfg") + " --out " + out.string() + " --grid-points 200") == 3);
    CHECK(last_log().find("grid") != std::string::npos);
    CHECK(run("modes --config " + cfg("erfc.cfg") + " --out " + out.string() + " --grid-points 200") == 3);
    CHECK(last_log().find("grid.points") != std::string::npos);

    const fs::path malformed = write_text("malformed.cfg", "hierarchy.type erfc\n");
    CHECK(run("verify --config " + malformed.string() + " --out " + out.string()) == 2);
    CHECK(run("verify --config " + (scratch() / "missing.cfg").string()) == 2);
    CHECK(run("modes --config " + cfg("riccati_mu_plus.cfg") + " --out " + out.string()) == 2);
    CHECK(run("") == 2);
    CHECK(run("verify --config " + cfg("erfc.cfg") + " --out " + out.string() + " --tol 1e-14") == 3);
}
