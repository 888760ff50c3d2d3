#include "winfty/config.hpp"

#include "winfty/util.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace winfty {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void key_fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) key_fail(key, "expected a number, got '" + value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    key_fail(key, "expected a number, got '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) key_fail(key, "expected an integer, got '" + value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    key_fail(key, "expected an integer, got '" + value + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");

    if (key == "experiment") {
      if (value != "exp1" && value != "exp2" && value != "exp3")
        key_fail(key, "must be one of exp1|exp2|exp3");
      config.experiment = value;
    } else if (key == "mesh.n") {
      const long n = parse_int(key, value);
      if (n < 4) key_fail(key, "must be >= 4");
      config.mesh_n = static_cast<int>(n);
    } else if (key == "mesh.file") {
      if (!std::filesystem::exists(value)) key_fail(key, "file does not exist: " + value);
      config.mesh_file = value;
    } else if (key == "levels") {
      const long v = parse_int(key, value);
      if (v < 1 || v > 12) key_fail(key, "must lie in [1,12]");
      config.levels = static_cast<int>(v);
    } else if (key == "mode") {
      if (value == "cascade") config.mode = RunMode::Cascade;
      else if (value == "converge") config.mode = RunMode::Converge;
      else key_fail(key, "must be cascade|converge");
    } else if (key == "gamma") {
      const double v = parse_double(key, value);
      if (!(v > 0.0 && v < 1.0)) key_fail(key, "must lie strictly in (0,1)");
      config.gamma = v;
    } else if (key == "t_min_exp") {
      const long v = parse_int(key, value);
      if (v < 1 || v > 40) key_fail(key, "must lie in [1,40]");
      config.t_min_exp = static_cast<int>(v);
    } else if (key == "admm.tau0") {
      const double v = parse_double(key, value);
      if (!(v > 0.0)) key_fail(key, "must be positive");
      config.admm.tau0 = v;
    } else if (key == "admm.tol") {
      const double v = parse_double(key, value);
      if (!(v > 0.0)) key_fail(key, "must be positive");
      config.admm.tol = v;
    } else if (key == "admm.max_iter") {
      const long v = parse_int(key, value);
      if (v < 1) key_fail(key, "must be >= 1");
      config.admm.max_iter = static_cast<int>(v);
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "seed") {
      const long v = parse_int(key, value);
      if (v < 0) key_fail(key, "must be >= 0");
      config.seed = static_cast<std::uint64_t>(v);
    } else {
      key_fail(key, "unknown key");
    }
  }
  return config;
}

DescentConfig RunConfig::descent() const {
  DescentConfig dc;
  dc.gamma = gamma;
  dc.t_min_exp = t_min_exp;
  dc.levels = levels;
  dc.mode = mode;
  dc.admm = admm;
  return dc;
}

ExperimentSetup RunConfig::setup() const {
  ExperimentSetup s;
  if (experiment == "exp1") s = experiment1();
  else if (experiment == "exp2") s = experiment2();
  else if (experiment == "exp3") s = experiment3();
  else throw ConfigError("unknown experiment: " + experiment);
  if (mesh_file) {
    s.mesh = MeshSpec{MeshSpec::Kind::File, 0, 0.0, 0.0, *mesh_file};
  } else if (mesh_n) {
    s.mesh.n = *mesh_n;
  }
  return s;
}

namespace {

ReferenceMesh build_mesh(const MeshSpec& spec) {
  switch (spec.kind) {
    case MeshSpec::Kind::SquareGrid:
      return generate_square_in_square(spec.n);
    case MeshSpec::Kind::Annulus: {
      const double mid = 0.5 * (spec.r_inner + spec.r_outer);
      const int radial = std::max(
          1, static_cast<int>(std::lround(spec.n * (spec.r_outer - spec.r_inner) /
                                          (2.0 * M_PI * mid))));
      return generate_annulus_in_square(spec.n, radial, spec.r_inner, spec.r_outer);
    }
    case MeshSpec::Kind::File:
      return read_mesh(spec.path);
  }
  throw std::logic_error("build_mesh: unreachable");
}

std::string history_csv(const std::vector<HistoryRow>& rows) {
  std::string out = "level,step,h,t_k,energy,pairing,dual_norm,hcd,dphi_norm,dphi_inv_norm,volume\n";
  char buf[320];
  for (const HistoryRow& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.level,
                  r.step, r.h, r.t, r.energy, r.pairing, r.dual_norm, r.hcd, r.dphi_norm,
                  r.dphi_inv_norm, r.volume);
    out += buf;
  }
  return out;
}

}  // namespace

int run(const RunConfig& config) {
  namespace fs = std::filesystem;
  try {
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    {  // Fail before the run if the output directory is not writable.
      const fs::path probe = out_dir / ".winfty-probe";
      std::ofstream test(probe);
      if (!test) throw std::runtime_error("output directory not writable: " + out_dir.string());
      test.close();
      fs::remove(probe);
    }

    const ExperimentSetup setup = config.setup();
    const ReferenceMesh mesh0 = build_mesh(setup.mesh);
    const DescentConfig dc = config.descent();
    const CascadeResult result = cascade(dc, setup, mesh0);

    atomic_write_file((out_dir / "history.csv").string(), history_csv(result.history));
    if (config.mode == RunMode::Converge)
      atomic_write_file((out_dir / "table.csv").string(), result.table.to_csv());
    for (std::size_t level = 0; level < result.meshes.size(); ++level) {
      ReferenceMesh deformed = result.meshes[level];
      deformed.vertices = result.final_phis[level].values;
      deformed.finalize();
      write_mesh(deformed, (out_dir / ("mesh_level" + std::to_string(level) + ".txt")).string());
    }

    std::cout << config.experiment << ": " << result.history.size() << " history rows over "
              << result.meshes.size() << " level(s); final energy "
              << result.history.back().energy << ", hcd " << result.history.back().hcd << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "winfty run failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace winfty
