#include "rdseg/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "rdseg/partition.hpp"
#include "rdseg/pgm.hpp"

namespace rdseg {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw InvalidInput("config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw InvalidInput("config: '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw InvalidInput("config: '" + key + "' out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw InvalidInput("config: '" + key + "' expects a boolean, got '" + text + "'");
}

fs::path resolve(const fs::path& base, const std::string& text) {
  fs::path p(trim(text));
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

// Shortest decimal that reads back to the same double.
std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const char* stop_norm_name(StopNorm n) {
  switch (n) {
    case StopNorm::kMax: return "max";
    case StopNorm::kL2: return "l2";
    case StopNorm::kRms: break;
  }
  return "rms";
}

std::string millis(double seconds) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, seconds, std::chars_format::fixed, 3);
  return std::string(buf, ptr);
}

}  // namespace

void RunConfig::validate() const {
  solver.validate();
  if (fitting_kind == FittingKind::kSelective && !markers_path)
    throw InvalidInput("config: selective fitting requires markers_path");
  if (!(gamma >= 0.0)) throw InvalidInput("config: gamma must be nonnegative");
  if (c1.has_value() != c2.has_value()) throw InvalidInput("config: give both c1 and c2");
  if (!c1 && !constants_mask)
    throw InvalidInput("config: give c1 and c2, or constants_mask to estimate them");
  if (c1) IntensityPair(*c1, *c2);
  for (double q : q_list)
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("config: q values must lie in [0, 1]");
  if (gt_max_outer < 1) throw InvalidInput("config: gt_max_outer must be at least 1");
  if (repeats < 1) throw InvalidInput("config: repeats must be at least 1");
}

std::vector<double> parse_q_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double("q_list", item));
  }
  if (out.empty()) throw InvalidInput("config: q_list is empty");
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value,
                   const fs::path& base_dir) {
  const std::string key = trim(raw_key);
  if (key == "image" || key == "image_path") {
    cfg.image_path = resolve(base_dir, value);
  } else if (key == "fitting" || key == "fitting_kind") {
    const std::string v = trim(value);
    if (v == "chan_vese") cfg.fitting_kind = FittingKind::kChanVese;
    else if (v == "selective") cfg.fitting_kind = FittingKind::kSelective;
    else throw InvalidInput("config: fitting_kind must be chan_vese or selective");
  } else if (key == "c1") {
    cfg.c1 = to_double(key, value);
  } else if (key == "c2") {
    cfg.c2 = to_double(key, value);
  } else if (key == "constants_mask") {
    cfg.constants_mask = resolve(base_dir, value);
  } else if (key == "markers" || key == "markers_path") {
    cfg.markers_path = resolve(base_dir, value);
  } else if (key == "gamma") {
    cfg.gamma = to_double(key, value);
  } else if (key == "normalize_fitting") {
    cfg.normalize_fitting = to_bool(key, value);
  } else if (key == "lambda") {
    cfg.solver.lambda = to_double(key, value);
  } else if (key == "theta") {
    cfg.solver.theta = to_double(key, value);
  } else if (key == "tau") {
    cfg.solver.tau = to_double(key, value);
  } else if (key == "delta") {
    cfg.solver.delta = to_double(key, value);
  } else if (key == "epsilon") {
    cfg.solver.epsilon = to_double(key, value);
  } else if (key == "alpha") {
    cfg.solver.alpha = to_double(key, value);
  } else if (key == "max_outer") {
    cfg.solver.max_outer = to_int(key, value);
  } else if (key == "inner_steps") {
    cfg.solver.inner_steps = to_int(key, value);
  } else if (key == "norm") {
    const std::string v = trim(value);
    if (v == "rms") cfg.solver.norm = StopNorm::kRms;
    else if (v == "l2") cfg.solver.norm = StopNorm::kL2;
    else if (v == "max") cfg.solver.norm = StopNorm::kMax;
    else throw InvalidInput("config: norm must be rms, l2 or max");
  } else if (key == "q_list" || key == "q") {
    cfg.q_list = parse_q_list(value);
  } else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw InvalidInput("config: seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "output_dir" || key == "out") {
    cfg.output_dir = resolve(base_dir, value);
  } else if (key == "gt_max_outer") {
    cfg.gt_max_outer = to_int(key, value);
  } else if (key == "repeats") {
    cfg.repeats = to_int(key, value);
  } else if (key == "parallel") {
    cfg.parallel = to_bool(key, value);
  } else {
    throw InvalidInput("config: unknown key '" + key + "'");
  }
}

void load_config_into(RunConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  const fs::path base = path.parent_path();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config '" + path.string() + "' line " + std::to_string(lineno) +
                         ": expected key=value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1), base);
  }
}

RunConfig load_config(const fs::path& path) {
  RunConfig cfg;
  load_config_into(cfg, path);
  return cfg;
}

void write_config(const fs::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config '" + path.string() + "'");
  out << "image_path=" << cfg.image_path.string() << '\n';
  out << "fitting_kind="
      << (cfg.fitting_kind == FittingKind::kSelective ? "selective" : "chan_vese") << '\n';
  if (cfg.c1) out << "c1=" << shortest(*cfg.c1) << "\nc2=" << shortest(*cfg.c2) << '\n';
  if (cfg.constants_mask) out << "constants_mask=" << cfg.constants_mask->string() << '\n';
  if (cfg.markers_path) out << "markers_path=" << cfg.markers_path->string() << '\n';
  out << "gamma=" << shortest(cfg.gamma) << '\n';
  out << "normalize_fitting=" << (cfg.normalize_fitting ? "true" : "false") << '\n';
  out << "lambda=" << shortest(cfg.solver.lambda) << '\n';
  out << "theta=" << shortest(cfg.solver.theta) << '\n';
  out << "tau=" << shortest(cfg.solver.tau) << '\n';
  out << "delta=" << shortest(cfg.solver.delta) << '\n';
  out << "epsilon=" << shortest(cfg.solver.epsilon) << '\n';
  out << "max_outer=" << cfg.solver.max_outer << '\n';
  out << "inner_steps=" << cfg.solver.inner_steps << '\n';
  out << "norm=" << stop_norm_name(cfg.solver.norm) << '\n';
  out << "q_list=";
  for (std::size_t i = 0; i < cfg.q_list.size(); ++i)
    out << (i ? "," : "") << shortest(cfg.q_list[i]);
  out << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "gt_max_outer=" << cfg.gt_max_outer << '\n';
  out << "repeats=" << cfg.repeats << '\n';
  out << "output_dir=" << cfg.output_dir.string() << '\n';
  if (!out) throw IoError("failed writing config '" + path.string() + "'");
}

ScalarField load_image(const RunConfig& cfg) {
  if (cfg.image_path.empty()) throw InvalidInput("config: image_path is not set");
  return to_unit(read_pgm(cfg.image_path));
}

ScalarField build_fitting(const RunConfig& cfg, const ScalarField& z) {
  const IntensityPair c = [&] {
    if (cfg.c1) return IntensityPair(*cfg.c1, *cfg.c2);
    const GrayImage m = read_pgm(*cfg.constants_mask);
    if (m.rows() != z.rows() || m.cols() != z.cols())
      throw InvalidInput("constants_mask dimensions differ from the image");
    return estimate_constants(z, image_to_mask(m).cast<double>());
  }();
  ScalarField f;
  if (cfg.fitting_kind == FittingKind::kSelective) {
    const MarkerSet markers = read_markers(*cfg.markers_path);
    f = distance_selective_fitting(z, c, markers, SelectiveParams{cfg.gamma});
  } else {
    f = chan_vese_fitting(z, c);
  }
  return cfg.normalize_fitting ? normalize_fitting(f) : f;
}

namespace {

void ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

SegmentOutcome run_segment(const RunConfig& cfg, double q) {
  cfg.validate();
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("q must lie in [0, 1]");
  const ScalarField z = load_image(cfg);
  const ScalarField f = build_fitting(cfg, z);
  ensure_output_dir(cfg.output_dir);

  SegmentOutcome out;
  out.result = solve(f, cfg.solver, q);
  out.mask = threshold_indicator(out.result.state.u, cfg.solver.epsilon);
  const auto& rep = out.result.report;
  const auto& part = out.result.partition;

  write_pgm(cfg.output_dir / "u.pgm", from_unit(out.result.state.u));
  write_pgm(cfg.output_dir / "mask.pgm", mask_to_image(out.mask));
  write_pgm(cfg.output_dir / "partition.pgm", partition_image(part));

  std::ofstream r(cfg.output_dir / "report.txt");
  if (!r) throw IoError("cannot write report in '" + cfg.output_dir.string() + "'");
  r << "q=" << shortest(q) << '\n'
    << "q_hat=" << shortest(part.q_hat) << '\n'
    << "rd_fraction=" << shortest(part.rd_fraction) << '\n'
    << "outer_iterations=" << rep.outer_iterations << '\n'
    << "final_residual=" << shortest(rep.final_residual) << '\n'
    << "converged=" << (rep.converged ? "true" : "false") << '\n'
    << "energy=" << shortest(rep.energy) << '\n'
    << "foreground_pixels=" << (out.mask != 0).count() << '\n';
  // Wall time last: everything above is reproducible byte for byte.
  r << "wall_time_s=" << millis(rep.wall_time) << '\n';
  if (!r) throw IoError("failed writing report in '" + cfg.output_dir.string() + "'");
  return out;
}

SweepRecord sweep_point(const ScalarField& f, const SolverParams& params, double q,
                        const GroundTruth& gt, int repeats) {
  SolveResult res = solve(f, params, q);
  double best = res.report.wall_time;
  for (int k = 1; k < repeats; ++k) best = std::min(best, solve(f, params, q).report.wall_time);

  SweepRecord rec;
  rec.q = q;
  rec.q_hat = res.partition.q_hat;
  rec.rd_fraction = res.partition.rd_fraction;
  rec.e1 = tanimoto(gt.mask, threshold_indicator(res.state.u, params.epsilon));
  rec.e2 = l2_difference(res.state.u, gt.u);
  rec.wall_time_s = best;
  rec.outer_iterations = res.report.outer_iterations;
  rec.converged = res.report.converged;
  return rec;
}

SweepOutcome run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.q_list.empty()) throw InvalidInput("config: q_list is empty");
  const ScalarField z = load_image(cfg);
  const ScalarField f = build_fitting(cfg, z);
  ensure_output_dir(cfg.output_dir);

  SweepOutcome out;
  SolverParams gt_params = cfg.solver;
  gt_params.max_outer = cfg.gt_max_outer;
  out.ground_truth = make_ground_truth(f, gt_params);
  write_pgm(cfg.output_dir / "gt_u.pgm", from_unit(out.ground_truth.u));
  write_pgm(cfg.output_dir / "gt_mask.pgm", mask_to_image(out.ground_truth.mask));

  const fs::path csv_path = cfg.output_dir / "sweep.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot write '" + csv_path.string() + "'");
  csv << sweep_csv_header() << '\n' << std::flush;

  auto emit = [&](const SweepRecord& rec) {
    out.records.push_back(rec);
    csv << sweep_csv_row(rec) << '\n' << std::flush;
    if (!csv) throw IoError("failed writing '" + csv_path.string() + "'");
  };

  if (cfg.parallel) {
    std::vector<std::future<SweepRecord>> jobs;
    jobs.reserve(cfg.q_list.size());
    for (double q : cfg.q_list)
      jobs.push_back(std::async(std::launch::async, [&, q] {
        return sweep_point(f, cfg.solver, q, out.ground_truth, cfg.repeats);
      }));
    for (auto& j : jobs) emit(j.get());
  } else {
    for (double q : cfg.q_list) emit(sweep_point(f, cfg.solver, q, out.ground_truth, cfg.repeats));
  }

  std::ofstream sum(cfg.output_dir / "sweep_summary.txt");
  if (!sum) throw IoError("cannot write sweep summary in '" + cfg.output_dir.string() + "'");
  sum << "gt_outer_iterations=" << out.ground_truth.report.outer_iterations << '\n'
      << "gt_converged=" << (out.ground_truth.report.converged ? "true" : "false") << '\n'
      << "gt_final_residual=" << shortest(out.ground_truth.report.final_residual) << '\n'
      << "timing_mode=" << (cfg.parallel ? "parallel" : "serial") << '\n';
  if (const auto ratio = time_ratio(out.records)) {
    sum << "time_ratio_accurate_vs_unrestricted=" << shortest(*ratio) << '\n'
        << "time_saving_percent=" << shortest(100.0 * (1.0 - *ratio)) << '\n';
  }
  return out;
}

std::optional<double> time_ratio(const std::vector<SweepRecord>& records, double min_e1) {
  double full = -1.0, sum = 0.0;
  int count = 0;
  for (const auto& r : records) {
    if (r.q == 1.0) full = r.wall_time_s;
    else if (r.q > 0.0 && r.e1 > min_e1) {
      sum += r.wall_time_s;
      ++count;
    }
  }
  if (full <= 0.0 || count == 0) return std::nullopt;
  return (sum / count) / full;
}

std::string sweep_csv_header() {
  return "q,q_hat,rd_fraction,e1,e2,wall_time_s,outer_iterations,converged";
}

std::string sweep_csv_row(const SweepRecord& r) {
  return shortest(r.q) + ',' + shortest(r.q_hat) + ',' + shortest(r.rd_fraction) + ',' +
         shortest(r.e1) + ',' + shortest(r.e2) + ',' + millis(r.wall_time_s) + ',' +
         std::to_string(r.outer_iterations) + ',' + (r.converged ? "true" : "false");
}

std::vector<SweepRecord> read_sweep_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != sweep_csv_header())
    throw IoError("'" + path.string() + "' does not start with the sweep CSV header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw IoError("malformed sweep CSV row in '" + path.string() + "'");
    try {
      SweepRecord r;
      r.q = to_double("q", cells[0]);
      r.q_hat = to_double("q_hat", cells[1]);
      r.rd_fraction = to_double("rd_fraction", cells[2]);
      r.e1 = to_double("e1", cells[3]);
      r.e2 = to_double("e2", cells[4]);
      r.wall_time_s = to_double("wall_time_s", cells[5]);
      r.outer_iterations = to_int("outer_iterations", cells[6]);
      r.converged = to_bool("converged", cells[7]);
      out.push_back(r);
    } catch (const InvalidInput& e) {
      throw IoError("malformed sweep CSV row in '" + path.string() + "': " + e.what());
    }
  }
  return out;
}

}  // namespace rdseg
