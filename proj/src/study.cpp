#include "igaplate/study.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "igaplate/benchmark.hpp"
#include "igaplate/error.hpp"
#include "igaplate/geometry_io.hpp"

namespace igaplate {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
T number(std::string_view s, std::string_view key) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::InvalidConfig, "bad value '" + std::string(s) + "' for " + std::string(key));
  return v;
}

bool boolean(std::string_view s, std::string_view key) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw Error(ErrorCode::InvalidConfig, "bad boolean '" + std::string(s) + "' for " + std::string(key));
}

std::vector<int> int_list(std::string_view s, std::string_view key) {
  std::vector<int> out;
  for (auto item : split_list(s)) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(number<int>(item, key));
      continue;
    }
    const int a = number<int>(trim(item.substr(0, dots)), key);
    const int b = number<int>(trim(item.substr(dots + 2)), key);
    if (b < a) throw Error(ErrorCode::InvalidConfig, "empty range in " + std::string(key));
    for (int v = a; v <= b; ++v) out.push_back(v);
  }
  return out;
}

void put_number(std::string& out, double v) {
  if (std::isnan(v)) return;  // empty field
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

PatchAssembly load_geometry(const std::string& name_or_path) {
  const auto names = geometry_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return geometry_catalog(name_or_path);
  std::ifstream probe(name_or_path);
  if (!probe) throw Error(ErrorCode::UnknownGeometry, "'" + name_or_path + "' is neither a catalog name nor a file");
  return read_geometry_file(name_or_path);
}

StudyConfig parse_study_config(std::string_view text) {
  StudyConfig cfg;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::replace(key.begin(), key.end(), '_', '-');
    const auto value = trim(line.substr(eq + 1));
    if (key == "geometry") {
      cfg.geometry = std::string(value);
    } else if (key == "variant" || key == "variants") {
      cfg.variants.clear();
      for (auto v : split_list(value)) cfg.variants.push_back(parse_variant(v));
    } else if (key == "degree" || key == "degrees") {
      cfg.degrees = int_list(value, key);
    } else if (key == "level" || key == "levels") {
      cfg.levels = int_list(value, key);
    } else if (key == "thickness" || key == "thicknesses") {
      cfg.thicknesses.clear();
      for (auto v : split_list(value)) cfg.thicknesses.push_back(number<double>(v, key));
    } else if (key == "continuity-reduction") {
      cfg.continuity_reduction = boolean(value, key);
    } else if (key == "no-continuity-reduction") {
      cfg.continuity_reduction = !boolean(value, key);
    } else if (key == "shear-weights") {
      cfg.shear_weights = parse_weight_mode(value);
    } else if (key == "condensation") {
      if (value == "unlumped") cfg.condensation = Condensation::unlumped;
      else if (value == "auto" || value == "automatic") cfg.condensation = Condensation::automatic;
      else throw Error(ErrorCode::InvalidConfig, "unknown condensation '" + std::string(value) + "'");
    } else if (key == "out") {
      cfg.out = std::string(value);
    } else if (key == "timing") {
      cfg.timing = boolean(value, key);
    } else if (key == "jobs") {
      cfg.jobs = number<int>(value, key);
    } else {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (cfg.variants.empty() || cfg.degrees.empty() || cfg.thicknesses.empty())
    throw Error(ErrorCode::InvalidConfig, "variant, degree and thickness lists must not be empty");
  if (cfg.levels.size() < 2) throw Error(ErrorCode::InvalidConfig, "at least two levels are needed for a rate");
  std::sort(cfg.levels.begin(), cfg.levels.end());
  if (std::adjacent_find(cfg.levels.begin(), cfg.levels.end()) != cfg.levels.end() || cfg.levels.front() < 0)
    throw Error(ErrorCode::InvalidConfig, "levels must be distinct and non-negative");
  for (double t : cfg.thicknesses)
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidConfig, "thickness must be positive");
  return cfg;
}

StudyConfig read_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_study_config(ss.str());
}

ConvergenceRecord run_cell(const std::vector<SurfacePatch>& coarse, const std::string& geometry,
                           const SolveConfig& cfg) {
  ConvergenceRecord rec;
  rec.geometry = geometry;
  rec.variant = cfg.variant;
  rec.p = cfg.degree;
  rec.t = cfg.thickness;
  rec.level = cfg.level;
  rec.rate = std::numeric_limits<double>::quiet_NaN();
  try {
    const PlateMaterial mat = material(cfg.E, cfg.nu, cfg.thickness, cfg.kappa);
    const auto sol = solve_variant(coarse, cfg, [&mat](double x, double y) { return load_function(x, y, mat); });
    rec.elems_per_dir = sol.disc.spaces.front().disp.ku.num_spans();
    rec.n_dof_primal = sol.diag.n_dof_primal;
    rec.n_dof_mixed = sol.diag.n_dof_mixed;
    rec.nnz_condensed = sol.diag.nnz_solved;
    rec.assembly_s = sol.diag.assembly_s;
    rec.factor_s = sol.diag.factor_s;
    rec.solve_s = sol.diag.solve_s;
    rec.lump_dev = sol.diag.lump_dev;
    const double t = cfg.thickness, nu = cfg.nu;
    rec.l2_error = l2_error(sol.disc, sol.d, [t, nu](double x, double y) { return reference_displacement(x, y, t, nu); });
  } catch (const std::exception& e) {
    rec.failure = e.what();
  }
  return rec;
}

std::vector<ConvergenceRecord> run_convergence_study(const StudyConfig& cfg) {
  const PatchAssembly geo = load_geometry(cfg.geometry);
  std::vector<SolveConfig> cells;
  for (Variant v : cfg.variants)
    for (int p : cfg.degrees)
      for (double t : cfg.thicknesses)
        for (int level : cfg.levels) {
          SolveConfig sc;
          sc.variant = v;
          sc.degree = p;
          sc.level = level;
          sc.thickness = t;
          sc.continuity_reduction = cfg.continuity_reduction;
          sc.shear_weights = cfg.shear_weights;
          sc.condensation = cfg.condensation;
          cells.push_back(sc);
        }

  std::vector<ConvergenceRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++)
      records[k] = run_cell(geo.patches, cfg.geometry, cells[k]);
  };
  int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // Rates against the previous level of the same series.
  for (std::size_t k = 1; k < records.size(); ++k) {
    auto& cur = records[k];
    const auto& prev = records[k - 1];
    if (cur.variant == prev.variant && cur.p == prev.p && cur.t == prev.t && cur.level == prev.level + 1 &&
        cur.ok() && prev.ok() && cur.l2_error > 0.0 && prev.l2_error > 0.0)
      cur.rate = std::log2(prev.l2_error / cur.l2_error);
  }
  if (!cfg.timing)
    for (auto& r : records) r.assembly_s = r.factor_s = r.solve_s = 0.0;
  return records;
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool timing) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    std::string line = r.geometry + ',' + std::string(to_string(r.variant)) + ',' + std::to_string(r.p) + ',';
    put_number(line, r.t);
    line += ',' + std::to_string(r.level) + ',';
    if (!r.ok()) {
      // Failed cell: the error tag takes the place of the error column.
      std::string tag = r.failure.substr(0, r.failure.find(':'));
      line += ",,,,error:" + tag + ",,,,,";
      out << line << '\n';
      continue;
    }
    line += std::to_string(r.elems_per_dir) + ',' + std::to_string(r.n_dof_primal) + ',' +
            std::to_string(r.n_dof_mixed) + ',' + std::to_string(r.nnz_condensed) + ',';
    put_number(line, r.l2_error);
    line += ',';
    put_number(line, r.rate);
    for (double v : {r.assembly_s, r.factor_s, r.solve_s}) {
      line += ',';
      put_number(line, timing ? v : 0.0);
    }
    line += ',';
    put_number(line, r.lump_dev);
    out << line << '\n';
  }
}

double ls_slope(const std::vector<int>& levels, const std::vector<double>& errors) {
  if (levels.size() != errors.size() || levels.size() < 2)
    throw Error(ErrorCode::DimensionMismatch, "slope needs at least two (level, error) pairs");
  const double n = static_cast<double>(levels.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double x = levels[k], y = -std::log2(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace igaplate
