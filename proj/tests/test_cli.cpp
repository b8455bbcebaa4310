#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "tpqrm/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("tpqrm_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code = -1;
  std::string err;
  json error() const { return json::parse(err)["error"]; }
};

Outcome run_cli(const Scratch& s, const std::string& command, const json& cfg, const std::string& extra = "") {
  const fs::path cfg_path = s.dir / "config.json";
  std::ofstream(cfg_path) << cfg.dump();
  const fs::path err = s.dir / "stderr.txt";
  const std::string cmd = std::string(TPQRM_CLI_BINARY) + " " + command + " --config " + cfg_path.string() + " " +
                          extra + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.err = slurp(err);
  return o;
}

json spectrum_config(const fs::path& out) {
  return {{"schema_version", 1},
          {"command", "spectrum"},
          {"model", {{"variant", "two_photon_jc"}, {"omega_c", 1.0}, {"g2", 0.01}}},
          {"numerics", {{"cutoff", 40}, {"k_levels", 10}}},
          {"output", {{"directory", out.string()}}}};
}

json transmission_config(const fs::path& out) {
  return {{"schema_version", 1},
          {"command", "transmission-scan"},
          {"model", {{"variant", "two_photon_jc"}, {"g2", 0.01}}},
          {"drive",
           {{"target", "cavity"},
            {"gamma", 1e-3},
            {"gamma_q", 1e-4},
            {"D", 1e-5},
            {"omega_d_grid", {{"start", 0.995}, {"stop", 1.005}, {"points", 11}}}}},
          {"numerics", {{"cutoff", 6}}},
          {"output", {{"directory", out.string()}}}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("invalid rate exits 2 and names the field") {
  Scratch s;
  json cfg = transmission_config(s.dir / "out");
  cfg["drive"]["gamma"] = -1.0;
  const auto o = run_cli(s, "transmission-scan", cfg);
  CHECK(o.code == 2);
  const auto e = o.error();
  CHECK(e["field"] == "drive.gamma");
  CHECK(e["category"] == "validation");
  CHECK_FALSE(fs::exists(s.dir / "out"));
}

TEST_CASE("unknown keys, wrong schema version and command mismatch are rejected") {
  Scratch s;
  json cfg = spectrum_config(s.dir / "out");
  cfg["model"]["g3"] = 0.1;
  auto o = run_cli(s, "spectrum", cfg);
  CHECK(o.code == 2);
  CHECK(o.error()["field"] == "model.g3");

  cfg = spectrum_config(s.dir / "out");
  cfg["schema_version"] = 2;
  o = run_cli(s, "spectrum", cfg);
  CHECK(o.code == 2);
  CHECK(o.error()["field"] == "schema_version");

  o = run_cli(s, "collapse", spectrum_config(s.dir / "out"));
  CHECK(o.code == 2);
  CHECK(o.error()["field"] == "command");

  cfg = spectrum_config(s.dir / "out");
  cfg["drive"] = {{"gamma", 1.0}};
  o = run_cli(s, "spectrum", cfg);
  CHECK(o.code == 2);
  CHECK(o.error()["field"] == "drive");
}

TEST_CASE("parse_config reads grids and defaults") {
  json cfg = transmission_config("x");
  const auto rc = tpqrm::cli::parse_config(cfg, tpqrm::cli::Command::transmission_scan);
  REQUIRE(rc.omega_d_grid.size() == 11);
  CHECK(rc.omega_d_grid.front() == 0.995);
  CHECK(rc.omega_d_grid.back() == 1.005);
  CHECK(rc.drive.lindblad.gamma == 1e-3);
  CHECK(rc.cutoff == 6);
  cfg["numerics"].erase("cutoff");
  CHECK(tpqrm::cli::parse_config(cfg, tpqrm::cli::Command::transmission_scan).cutoff == 20);
  cfg["drive"]["D"] = 5e-3;
  CHECK(tpqrm::cli::parse_config(cfg, tpqrm::cli::Command::transmission_scan).cutoff == 40);
  CHECK(tpqrm::cli::parse_config(spectrum_config("x"), tpqrm::cli::Command::spectrum).k_levels == 10);
}

TEST_CASE("spectrum run: doublet spacing and manifest") {
  Scratch s;
  const auto o = run_cli(s, "spectrum", spectrum_config(s.dir / "out"));
  REQUIRE(o.code == 0);
  const auto rows = read_csv(s.dir / "out" / "spectrum.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "param");
  CHECK(rows[0][1] == "level_0");
  CHECK(rows[0].back() == "converged");
  CHECK(rows[0].size() == 22);
  CHECK(std::stod(rows[1][4]) - std::stod(rows[1][3]) == doctest::Approx(2 * std::sqrt(2.0) * 0.01).epsilon(1e-9));
  CHECK(rows[1].back() == "true");

  const json m = json::parse(slurp(s.dir / "out" / "manifest.json"));
  CHECK(m["schema_version"] == 1);
  CHECK(m["command"] == "spectrum");
  CHECK(m["outputs"] == json::array({"spectrum.csv"}));
  CHECK(m["convergence"]["all_converged"] == true);
  CHECK(m["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(m["versions"].contains("eigen"));
  CHECK(m.contains("wall_time_s"));
  CHECK(m["seed"].is_null());
  for (const auto& entry : fs::directory_iterator(s.dir / "out"))
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
}

TEST_CASE("collapse run finds omega_c / 4") {
  Scratch s;
  const json cfg = {{"schema_version", 1},
                    {"command", "collapse"},
                    {"model", {{"variant", "two_photon_qrm_full"}}},
                    {"numerics", {{"collapse", {{"lo", 0.1}, {"hi", 0.4}, {"cutoff", 120}}}}},
                    {"output", {{"directory", (s.dir / "out").string()}}}};
  REQUIRE(run_cli(s, "collapse", cfg).code == 0);
  const json c = json::parse(slurp(s.dir / "out" / "collapse.json"));
  CHECK(c["g_col"].get<double>() == doctest::Approx(0.25).epsilon(0.01));
  CHECK(c["bracket"].size() == 2);
  CHECK(c["cutoff"] == 120);
}

TEST_CASE("output is byte-identical across worker counts") {
  Scratch s;
  const json cfg = transmission_config(s.dir / "unused");
  REQUIRE(run_cli(s, "transmission-scan", cfg, "--workers 1 --out " + (s.dir / "a").string()).code == 0);
  REQUIRE(run_cli(s, "transmission-scan", cfg, "--workers 1 --out " + (s.dir / "b").string()).code == 0);
  REQUIRE(run_cli(s, "transmission-scan", cfg, "--workers 4 --out " + (s.dir / "c").string()).code == 0);
  const auto a = slurp(s.dir / "a" / "transmission.csv");
  CHECK(a == slurp(s.dir / "b" / "transmission.csv"));
  CHECK(a == slurp(s.dir / "c" / "transmission.csv"));
  CHECK(slurp(s.dir / "a" / "peaks.json") == slurp(s.dir / "c" / "peaks.json"));
  const auto rows = read_csv(s.dir / "a" / "transmission.csv");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"omega_d", "D", "T", "g2", "g3", "n_out", "converged"});
  const json m = json::parse(slurp(s.dir / "c" / "manifest.json"));
  CHECK(m["workers"] == 4);
  const json peaks = json::parse(slurp(s.dir / "a" / "peaks.json"));
  REQUIRE(peaks["peaks"].size() == 1);
  CHECK(peaks["peaks"][0]["omega_d"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unwritable output directory exits 4") {
  Scratch s;
  std::ofstream(s.dir / "blocker") << "x";
  const auto o = run_cli(s, "spectrum", spectrum_config(s.dir / "blocker" / "out"));
  CHECK(o.code == 4);
  CHECK(o.error()["category"] == "io");
}

TEST_CASE("missing config file exits 4, malformed JSON exits 2") {
  Scratch s;
  const std::string cmd = std::string(TPQRM_CLI_BINARY) + " spectrum --config " + (s.dir / "nope.json").string() +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 4);
  std::ofstream(s.dir / "bad.json") << "{ not json";
  const std::string bad = std::string(TPQRM_CLI_BINARY) + " spectrum --config " + (s.dir / "bad.json").string() +
                          " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}

TEST_CASE("circuit parameters and JSON table format") {
  Scratch s;
  const json cfg = {{"schema_version", 1},
                    {"command", "circuit-params"},
                    {"circuit",
                     {{"I_C_uA", 1.0}, {"omega_SQ_GHz", 5.0}, {"M_pH", 50.0}, {"I_p_nA", 500.0}, {"Phi_DC_phi0", 0.0}}},
                    {"output", {{"directory", (s.dir / "out").string()}}}};
  REQUIRE(run_cli(s, "circuit-params", cfg).code == 0);
  const json c = json::parse(slurp(s.dir / "out" / "circuit.json"));
  CHECK(c["omega_SQ_over_2pi_GHz"].get<double>() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(c["g2_rad_per_s"].get<double>() == 0.0);
  CHECK(c["g1_rad_per_s"].get<double>() == 0.0);
  CHECK(c["L_J_H"].get<double>() == doctest::Approx(1.6456e-10).epsilon(1e-4));

  json spec = spectrum_config(s.dir / "js");
  spec["output"]["format"] = "json";
  REQUIRE(run_cli(s, "spectrum", spec).code == 0);
  const json t = json::parse(slurp(s.dir / "js" / "spectrum.json"));
  CHECK(t["columns"][0] == "param");
  CHECK(t["columns"].back() == "converged");
  CHECK(t["rows"].size() == 1);
  CHECK(t["rows"][0].back() == true);
}

TEST_CASE("number formatting and config hash") {
  CHECK(tpqrm::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(tpqrm::cli::format_number(2.0) == "2");
  const json a = json::parse(R"({"b": 1, "a": 2})");
  const json b = json::parse(R"({"a": 2, "b": 1})");
  CHECK(tpqrm::cli::config_hash(a) == tpqrm::cli::config_hash(b));
  CHECK(tpqrm::cli::config_hash(a) != tpqrm::cli::config_hash(json::parse(R"({"a": 3, "b": 1})")));
}

}  // TEST_SUITE
