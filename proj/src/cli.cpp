#include "tpqrm/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "tpqrm/error.hpp"

namespace tpqrm::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::coupling_scan: return "coupling-scan";
    case Command::transmission_scan: return "transmission-scan";
    case Command::blockade_scan: return "blockade-scan";
    case Command::collapse: return "collapse";
    case Command::circuit_params: return "circuit-params";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::spectrum, Command::coupling_scan, Command::transmission_scan, Command::blockade_scan,
                 Command::collapse, Command::circuit_params})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string config_hash(const json& doc) {
  const std::string canon = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::validation, field + ": " + message, field);
}

// Strict view of one JSON object: every key must be consumed before finish().
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return j_.contains(k); }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  std::optional<double> opt_number(const std::string& k) {
    if (!has(k)) return std::nullopt;
    const json& v = raw(k);
    if (!v.is_number()) fail(key(k), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key(k), "must be finite");
    return d;
  }
  double number(const std::string& k, double fallback) { return opt_number(k).value_or(fallback); }
  double required_number(const std::string& k) {
    if (!has(k)) fail(key(k), "is required");
    return *opt_number(k);
  }

  std::optional<long long> opt_integer(const std::string& k) {
    if (!has(k)) return std::nullopt;
    const json& v = raw(k);
    if (!v.is_number_integer()) fail(key(k), "must be an integer");
    return v.get<long long>();
  }

  std::optional<std::string> opt_string(const std::string& k) {
    if (!has(k)) return std::nullopt;
    const json& v = raw(k);
    if (!v.is_string()) fail(key(k), "must be a string");
    return v.get<std::string>();
  }

  std::optional<bool> opt_bool(const std::string& k) {
    if (!has(k)) return std::nullopt;
    const json& v = raw(k);
    if (!v.is_boolean()) fail(key(k), "must be a boolean");
    return v.get<bool>();
  }

  void forbid(const std::string& k, std::string_view why) {
    if (has(k)) fail(key(k), std::string(why));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(key(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// A grid is an explicit ascending array or {"start", "stop", "points"}.
std::vector<double> parse_grid(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) fail(path, "grid entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    Section s(j, path);
    const double start = s.required_number("start");
    const double stop = s.required_number("stop");
    const auto points = s.opt_integer("points");
    if (!points) fail(s.key("points"), "is required");
    if (*points < 1 || *points > 1'000'000) fail(s.key("points"), "must be in [1, 1000000]");
    s.finish();
    if (*points == 1) return {start};
    for (long long i = 0; i < *points; ++i)
      out.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(*points - 1));
  } else {
    fail(path, "must be an array or a {start, stop, points} object");
  }
  if (out.empty()) fail(path, "grid is empty");
  for (double v : out)
    if (!std::isfinite(v)) fail(path, "grid entries must be finite");
  if (!std::is_sorted(out.begin(), out.end())) fail(path, "grid must be ascending");
  return out;
}

template <class F>
void prefixed(const std::string& prefix, F&& body) {
  try {
    body();
  } catch (const NonUniqueSteadyState&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.kind(), prefix + (e.field().empty() ? "" : e.field()) + ": " + e.what(),
                prefix + (e.field().empty() ? std::string("*") : e.field()));
  }
}

ModelSpec parse_model(const json& j) {
  Section s(j, "model");
  ModelSpec m;
  const auto name = s.opt_string("variant");
  if (!name) fail("model.variant", "is required");
  const auto v = parse_variant(*name);
  if (!v) fail("model.variant", "unknown variant '" + *name + "'");
  m.variant = *v;
  m.omega_c = s.number("omega_c", m.omega_c);
  m.omega_q = s.opt_number("omega_q");
  m.g = s.number("g", 0.0);
  m.g2 = s.number("g2", 0.0);
  m.g4 = s.number("g4", 0.0);
  m.J = s.number("J", 0.0);
  if (auto n = s.opt_integer("n_qubits")) {
    if (*n < 1 || *n > 12) fail("model.n_qubits", "must be in [1, 12]");
    m.n_qubits = static_cast<int>(*n);
  }
  s.finish();
  prefixed("model.", [&] { m.validate(); });
  return m;
}

void parse_rates(Section& s, LindbladConfig& cfg) {
  cfg.gamma = s.number("gamma", 0.0);
  cfg.gamma_q = s.number("gamma_q", 0.0);
  cfg.gamma_phi = s.number("gamma_phi", 0.0);
  prefixed("drive.", [&] { cfg.validate(); });
}

void parse_circuit(const json& j, RunConfig& cfg) {
  Section s(j, "circuit");
  auto& p = cfg.circuit;
  p.I_C = s.required_number("I_C_uA") * 1e-6;
  p.M = s.number("M_pH", 0.0) * 1e-12;
  p.I_p = s.number("I_p_nA", 0.0) * 1e-9;
  p.Phi_DC = s.number("Phi_DC_phi0", 0.0) * circuit::kFluxQuantum;
  p.phi_DC = s.number("phi_DC", 0.0);
  if (auto ib = s.opt_number("I_B_uA")) {
    if (s.has("phi_DC")) fail("circuit.I_B_uA", "give either I_B_uA or phi_DC, not both");
    p.I_B = *ib * 1e-6;
  }
  const auto c = s.opt_number("C_SQ_fF");
  const auto f = s.opt_number("omega_SQ_GHz");
  if (c && f) fail("circuit.C_SQ_fF", "give either C_SQ_fF or omega_SQ_GHz, not both");
  if (!c && !f) fail("circuit.C_SQ_fF", "one of C_SQ_fF or omega_SQ_GHz is required");
  s.finish();
  if (c) {
    p.C_SQ = *c * 1e-15;
  } else {
    if (!(*f > 0.0)) fail("circuit.omega_SQ_GHz", "must be > 0");
    circuit::CircuitParams probe = p;
    probe.C_SQ = 1.0;
    prefixed("circuit.", [&] {
      p.C_SQ = circuit::capacitance_for_frequency(circuit::josephson_inductance(probe), 2.0 * circuit::kPi * *f * 1e9);
    });
  }
  prefixed("circuit.", [&] { p.validate(); });
}

}  // namespace

RunConfig parse_config(const json& doc, Command command) {
  Section top(doc, "");
  RunConfig cfg;
  cfg.command = command;

  const auto version = top.opt_integer("schema_version");
  if (!version) fail("schema_version", "is required");
  if (*version != kSchemaVersion) fail("schema_version", "unsupported version " + std::to_string(*version));
  if (auto c = top.opt_string("command")) {
    if (c != to_string(command))
      fail("command", "config is for '" + *c + "' but the subcommand is '" + std::string(to_string(command)) + "'");
  }

  const bool wants_model = command != Command::circuit_params;
  const bool wants_drive = command == Command::transmission_scan || command == Command::blockade_scan;
  const std::string unused = "is not used by " + std::string(to_string(command));

  if (wants_model) {
    if (!top.has("model")) fail("model", "is required");
    cfg.model = parse_model(top.raw("model"));
  } else {
    top.forbid("model", unused);
  }

  if (command == Command::coupling_scan) {
    if (!top.has("scan")) fail("scan", "is required");
    Section s(top.raw("scan"), "scan");
    if (!s.has("coupling")) fail("scan.coupling", "is required");
    cfg.coupling_grid = parse_grid(s.raw("coupling"), "scan.coupling");
    s.finish();
  } else {
    top.forbid("scan", unused);
  }

  if (wants_drive) {
    prefixed("model.", [&] { check_scattering_model(cfg.model); });
    if (!top.has("drive")) fail("drive", "is required");
    Section s(top.raw("drive"), "drive");
    const auto target = s.opt_string("target");
    if (target) {
      const auto t = parse_drive_target(*target);
      if (!t) fail("drive.target", "must be 'cavity' or 'qubit'");
      cfg.drive.target = *t;
    }
    parse_rates(s, cfg.drive.lindblad);
    if (!(cfg.drive.lindblad.gamma > 0.0)) fail("drive.gamma", "driven runs need gamma > 0");
    if (command == Command::transmission_scan) {
      s.forbid("omega_d", "use omega_d_grid for transmission-scan");
      s.forbid("D_grid", unused);
      if (!s.has("omega_d_grid")) fail("drive.omega_d_grid", "is required");
      cfg.omega_d_grid = parse_grid(s.raw("omega_d_grid"), "drive.omega_d_grid");
      if (cfg.omega_d_grid.front() <= 0.0) fail("drive.omega_d_grid", "frequencies must be > 0");
      cfg.drive.intensity = s.required_number("D");
      if (cfg.drive.intensity <= 0.0) fail("drive.D", "must be > 0");
      cfg.D_grid = {cfg.drive.intensity};
    } else {
      s.forbid("omega_d_grid", unused);
      s.forbid("D", "use D_grid for blockade-scan");
      if (!s.has("D_grid")) fail("drive.D_grid", "is required");
      cfg.D_grid = parse_grid(s.raw("D_grid"), "drive.D_grid");
      if (cfg.D_grid.front() <= 0.0) fail("drive.D_grid", "intensities must be > 0");
      cfg.omega_d = s.opt_number("omega_d");
      if (cfg.omega_d && *cfg.omega_d <= 0.0) fail("drive.omega_d", "must be > 0");
    }
    s.finish();
  } else {
    top.forbid("drive", unused);
  }

  if (command == Command::circuit_params) {
    if (!top.has("circuit")) fail("circuit", "is required");
    parse_circuit(top.raw("circuit"), cfg);
  } else {
    top.forbid("circuit", unused);
  }

  // numerics
  int default_cutoff = 60;
  if (wants_drive) {
    const double d_max = cfg.D_grid.back();
    default_cutoff = d_max <= cfg.drive.lindblad.gamma ? 20 : 40;
  }
  cfg.cutoff = default_cutoff;
  if (top.has("numerics")) {
    if (command == Command::circuit_params) fail("numerics", unused);
    Section s(top.raw("numerics"), "numerics");
    if (auto c = s.opt_integer("cutoff")) {
      const long long lo = wants_drive ? 2 : 8;
      if (*c < lo || *c > 2000) fail("numerics.cutoff", "must be in [" + std::to_string(lo) + ", 2000]");
      cfg.cutoff = static_cast<int>(*c);
    }
    if (auto k = s.opt_integer("k_levels")) {
      if (*k < 1) fail("numerics.k_levels", "must be >= 1");
      cfg.k_levels = static_cast<int>(*k);
    }
    cfg.level_tol = s.number("level_tol", cfg.level_tol);
    cfg.observable_tol = s.number("observable_tol", cfg.observable_tol);
    if (!(cfg.level_tol > 0.0)) fail("numerics.level_tol", "must be > 0");
    if (!(cfg.observable_tol > 0.0)) fail("numerics.observable_tol", "must be > 0");
    cfg.refine_peaks = s.opt_bool("refine_peaks").value_or(false);
    if (cfg.refine_peaks && command != Command::transmission_scan) fail("numerics.refine_peaks", unused);
    if (s.has("collapse")) {
      if (command != Command::collapse) fail("numerics.collapse", unused);
      Section c(s.raw("collapse"), "numerics.collapse");
      cfg.collapse_lo = c.required_number("lo");
      cfg.collapse_hi = c.required_number("hi");
      if (auto cut = c.opt_integer("cutoff")) {
        if (*cut < 8 || *cut > 2000) fail("numerics.collapse.cutoff", "must be in [8, 2000]");
        cfg.collapse.cutoff = static_cast<int>(*cut);
      }
      cfg.collapse.cutoff_ratio = c.number("cutoff_ratio", cfg.collapse.cutoff_ratio);
      cfg.collapse.drop_tolerance = c.number("drop_tolerance", cfg.collapse.drop_tolerance);
      cfg.collapse.relative_precision = c.number("relative_precision", cfg.collapse.relative_precision);
      c.finish();
      if (!(cfg.collapse.cutoff_ratio > 1.0)) fail("numerics.collapse.cutoff_ratio", "must be > 1");
      if (!(cfg.collapse.drop_tolerance > 0.0)) fail("numerics.collapse.drop_tolerance", "must be > 0");
      if (!(cfg.collapse.relative_precision > 0.0)) fail("numerics.collapse.relative_precision", "must be > 0");
      if (!(cfg.collapse_lo >= 0.0 && cfg.collapse_lo < cfg.collapse_hi))
        fail("numerics.collapse.lo", "need 0 <= lo < hi");
    }
    s.finish();
  }
  if (command == Command::collapse && cfg.collapse_hi == 0.0) fail("numerics.collapse", "is required");
  if (command == Command::spectrum || command == Command::coupling_scan) {
    const Index dim = cfg.model.space(cfg.cutoff).total_dim();
    if (cfg.k_levels > dim) fail("numerics.k_levels", "exceeds the Hilbert-space dimension");
  }

  if (top.has("output")) {
    Section s(top.raw("output"), "output");
    cfg.out_dir = s.opt_string("directory").value_or("");
    if (auto f = s.opt_string("format")) {
      if (*f == "csv") cfg.format = OutputFormat::csv;
      else if (*f == "json") cfg.format = OutputFormat::json;
      else fail("output.format", "must be 'csv' or 'json'");
    }
    s.finish();
  }
  top.finish();
  return cfg;
}

namespace {

using Files = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  std::vector<bool> converged;
};

std::string render(const Table& t, OutputFormat fmt) {
  if (fmt == OutputFormat::csv) {
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << ",converged\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
        if (c) os << ',';
        if (t.rows[r][c]) os << format_number(*t.rows[r][c]);
      }
      os << ',' << (t.converged[r] ? "true" : "false") << '\n';
    }
    return os.str();
  }
  json j;
  j["columns"] = t.columns;
  j["columns"].push_back("converged");
  j["rows"] = json::array();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    json row = json::array();
    for (const auto& v : t.rows[r]) row.push_back(v ? json(*v) : json(nullptr));
    row.push_back(bool(t.converged[r]));
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string table_name(const std::string& stem, OutputFormat fmt) {
  return stem + (fmt == OutputFormat::csv ? ".csv" : ".json");
}

Table spectrum_table(const SpectrumScan& scan) {
  Table t;
  const auto k = static_cast<std::size_t>(scan.levels.cols());
  t.columns.push_back("param");
  for (std::size_t i = 0; i < k; ++i) t.columns.push_back("level_" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) t.columns.push_back("parity_" + std::to_string(i));
  for (std::size_t r = 0; r < scan.grid.size(); ++r) {
    std::vector<std::optional<double>> row{scan.grid[r]};
    for (std::size_t i = 0; i < k; ++i) row.emplace_back(scan.levels(static_cast<Index>(r), static_cast<Index>(i)));
    for (std::size_t i = 0; i < k; ++i) row.emplace_back(scan.parity(static_cast<Index>(r), static_cast<Index>(i)));
    t.rows.push_back(std::move(row));
    t.converged.push_back(scan.converged[r]);
  }
  return t;
}

Table transmission_table(std::span<const TransmissionPoint> points) {
  Table t;
  t.columns = {"omega_d", "D", "T", "g2", "g3", "n_out"};
  for (const auto& p : points) {
    t.rows.push_back({p.omega_d, p.D, p.T, p.g2, p.g3, p.n_out});
    t.converged.push_back(p.ok() && p.converged);
  }
  return t;
}

json point_errors(std::span<const TransmissionPoint> points) {
  json out = json::array();
  for (const auto& p : points)
    if (!p.ok()) out.push_back({{"omega_d", p.omega_d}, {"D", p.D}, {"message", p.error}});
  return out;
}

void write_atomic(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path target = dir / name;
  const fs::path tmp = dir / ("." + name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing", "output.directory");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "failed writing " + tmp.string(), "output.directory");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot move result into " + target.string(), "output.directory");
  }
}

json versions() {
  return {{"tpqrm", std::string(kVersion)},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", std::string(__VERSION__)},
#ifdef _OPENMP
          {"openmp", _OPENMP},
#endif
          {"config_schema", kSchemaVersion}};
}

}  // namespace

RunResult run(const RunConfig& cfg, const json& raw, const RunOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  const std::string out_dir = opts.out_dir.value_or(cfg.out_dir);
  if (out_dir.empty()) fail("output.directory", "no output directory (set output.directory or pass --out)");
  const ExecutionPolicy exec{opts.workers};

  Files files;
  RunResult result;
  std::size_t rows = 0;
  auto count = [&](const std::vector<bool>& flags) {
    rows += flags.size();
    for (bool f : flags)
      if (!f) ++result.unconverged_rows;
  };

  switch (cfg.command) {
    case Command::spectrum:
    case Command::coupling_scan: {
      std::vector<double> grid = cfg.coupling_grid;
      if (cfg.command == Command::spectrum)
        grid = {swept_coupling(cfg.model.variant) == "g2" ? cfg.model.g2 : cfg.model.g};
      const auto scan = coupling_scan(cfg.model, grid, cfg.k_levels, cfg.cutoff, exec);
      auto table = spectrum_table(scan);
      for (std::size_t r = 0; r < scan.grid.size(); ++r) table.converged[r] = scan.relative_change[r] <= cfg.level_tol;
      count(table.converged);
      const std::string stem = cfg.command == Command::spectrum ? "spectrum" : "coupling_scan";
      files.emplace_back(table_name(stem, cfg.format), render(table, cfg.format));
      break;
    }
    case Command::transmission_scan: {
      PointOptions po;
      po.cutoff = cfg.cutoff;
      po.convergence_tol = cfg.observable_tol;
      const auto points = transmission_scan(cfg.model, cfg.drive, cfg.omega_d_grid, cfg.drive.intensity, po, exec);
      const auto table = transmission_table(points);
      count(table.converged);
      files.emplace_back(table_name("transmission", cfg.format), render(table, cfg.format));
      auto peaks = find_peaks(points);
      if (cfg.refine_peaks) {
        const double spacing = cfg.omega_d_grid.size() > 1
                                   ? (cfg.omega_d_grid.back() - cfg.omega_d_grid.front()) /
                                         static_cast<double>(cfg.omega_d_grid.size() - 1)
                                   : 0.0;
        peaks = refine_peaks(cfg.model, cfg.drive, cfg.drive.intensity, points, peaks, po, 1e-3 * spacing);
      }
      json pj = {{"refined", cfg.refine_peaks}, {"peaks", json::array()}, {"failed_points", point_errors(points)}};
      for (const auto& p : peaks) pj["peaks"].push_back({{"omega_d", p.omega_d}, {"T", p.T}});
      files.emplace_back("peaks.json", pj.dump(2) + "\n");
      break;
    }
    case Command::blockade_scan: {
      PointOptions po;
      po.cutoff = cfg.cutoff;
      po.convergence_tol = cfg.observable_tol;
      DriveConfig drive = cfg.drive;
      drive.omega_d = cfg.omega_d.value_or(blockade_drive_frequency(cfg.model, drive.target));
      const auto scan = blockade_scan(cfg.model, drive, cfg.D_grid, po, exec);
      const auto table = transmission_table(scan.points);
      count(table.converged);
      files.emplace_back(table_name("blockade", cfg.format), render(table, cfg.format));
      json bj = {{"omega_d", drive.omega_d}, {"window", nullptr}, {"failed_points", point_errors(scan.points)}};
      if (scan.window) bj["window"] = {scan.window->first, scan.window->second};
      files.emplace_back("blockade.json", bj.dump(2) + "\n");
      break;
    }
    case Command::collapse: {
      const auto est = detect_collapse(cfg.model, cfg.collapse_lo, cfg.collapse_hi, cfg.collapse);
      json cj = {{"g_col", est.g_col},
                 {"bracket", {est.bracket_low, est.bracket_high}},
                 {"evaluations", est.evaluations},
                 {"variant", std::string(to_string(cfg.model.variant))},
                 {"n_qubits", cfg.model.required_qubits()},
                 {"cutoff", cfg.collapse.cutoff},
                 {"cutoff_ratio", cfg.collapse.cutoff_ratio},
                 {"drop_tolerance", cfg.collapse.drop_tolerance}};
      files.emplace_back("collapse.json", cj.dump(2) + "\n");
      break;
    }
    case Command::circuit_params: {
      circuit::CircuitReport r;
      prefixed("circuit.", [&] { r = circuit::report(cfg.circuit); });
      json cj = {{"L_J_H", r.L_J},
                 {"omega_SQ_rad_per_s", r.omega_SQ},
                 {"omega_SQ_over_2pi_GHz", r.omega_SQ / (2.0 * circuit::kPi) / 1e9},
                 {"C_SQ_F", cfg.circuit.C_SQ},
                 {"E_J_J", r.E_J},
                 {"E_C_J", r.E_C},
                 {"phi_DC_rad", r.phi_DC},
                 {"g1_rad_per_s", r.g1},
                 {"g1_over_omega_SQ", r.g1 / r.omega_SQ},
                 {"g2_rad_per_s", r.g2 ? json(*r.g2) : json(nullptr)},
                 {"g2_over_omega_SQ", r.g2 ? json(*r.g2 / r.omega_SQ) : json(nullptr)},
                 {"g4_over_g2", r.quartic_ratio}};
      files.emplace_back("circuit.json", cj.dump(2) + "\n");
      break;
    }
  }
  result.all_converged = result.unconverged_rows == 0;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw Error(ErrorKind::io, "cannot create output directory " + out_dir, "output.directory");
  for (const auto& [name, content] : files) {
    write_atomic(out_dir, name, content);
    result.files.push_back(name);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest = {{"schema_version", kSchemaVersion},
                   {"command", std::string(to_string(cfg.command))},
                   {"config_hash", config_hash(raw)},
                   {"versions", versions()},
                   {"workers", resolve_workers(exec)},
                   {"seed", opts.seed ? json(*opts.seed) : json(nullptr)},
                   {"outputs", result.files},
                   {"convergence",
                    {{"all_converged", result.all_converged}, {"rows", rows}, {"unconverged_rows", result.unconverged_rows}}},
                   {"wall_time_s", wall}};
  write_atomic(out_dir, "manifest.json", manifest.dump(2) + "\n");
  result.files.push_back("manifest.json");
  return result;
}

namespace {

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::validation: return 2;
    case ErrorCategory::numerical: return 3;
    case ErrorCategory::io: return 4;
  }
  return 1;
}

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

int report_error(const Error& e) {
  json j = {{"error",
             {{"category", std::string(category_name(e.category()))},
              {"kind", std::string(to_string(e.kind()))},
              {"field", e.field().empty() ? json(nullptr) : json(e.field())},
              {"message", e.what()}}}};
  if (const auto* nu = dynamic_cast<const NonUniqueSteadyState*>(&e)) j["error"]["gap"] = nu->gap();
  std::cerr << j.dump() << std::endl;
  return exit_code(e.category());
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read config file " + path, "config");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::validation, std::string("config is not valid JSON: ") + e.what(), "config");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon Rabi model simulation engine"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  int workers = 0;
  std::optional<long long> seed;

  const std::map<Command, std::string> descriptions = {
      {Command::spectrum, "lowest levels and parities at one coupling"},
      {Command::coupling_scan, "levels and parities over a coupling grid"},
      {Command::transmission_scan, "steady-state transmission and correlations over a drive-frequency grid"},
      {Command::blockade_scan, "correlations over a drive-intensity grid at fixed frequency"},
      {Command::collapse, "coupling where the spectrum becomes unbounded"},
      {Command::circuit_params, "SQUID circuit parameters to model couplings"}};
  std::map<CLI::App*, Command> subs;
  for (const auto& [cmd, text] : descriptions) {
    auto* sub = app.add_subcommand(std::string(to_string(cmd)), text);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--workers", workers, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "reserved; no stochastic paths");
    subs[sub] = cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Command command = Command::spectrum;
  for (const auto& [sub, cmd] : subs)
    if (sub->parsed()) command = cmd;

  try {
    const json raw = load_config(config_path);
    const RunConfig cfg = parse_config(raw, command);
    RunOptions opts;
    opts.out_dir = out_dir;
    opts.workers = workers;
    opts.seed = seed;
    const RunResult res = run(cfg, raw, opts);
    std::cout << "wrote " << res.files.size() << " files to " << opts.out_dir.value_or(cfg.out_dir)
              << (res.all_converged ? "" : " (" + std::to_string(res.unconverged_rows) + " unconverged rows)")
              << std::endl;
    return 0;
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    return report_error(Error(ErrorKind::stiffness, std::string("unexpected failure: ") + e.what()));
  }
}

}  // namespace tpqrm::cli
