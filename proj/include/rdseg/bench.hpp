#pragma once

// Run configuration, single segmentations and q-sweeps with file output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rdseg/fitting.hpp"
#include "rdseg/metrics.hpp"
#include "rdseg/solver.hpp"

namespace rdseg {

enum class FittingKind { kChanVese, kSelective };

struct RunConfig {
  std::filesystem::path image_path;
  FittingKind fitting_kind = FittingKind::kChanVese;
  std::optional<double> c1;
  std::optional<double> c2;
  // Used to estimate c1/c2 when they are not given.
  std::optional<std::filesystem::path> constants_mask;
  std::optional<std::filesystem::path> markers_path;
  double gamma = 0.0;
  bool normalize_fitting = false;
  SolverParams solver;
  std::vector<double> q_list{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
  int gt_max_outer = 200000;  // iteration cap for the delta = 1e-10 reference
  int repeats = 1;            // sweep timing: best of this many solves
  bool parallel = false;

  /// Throws InvalidInput on inconsistent settings.
  void validate() const;
};

/// Applies one key=value setting. Relative paths resolve against base_dir.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir = {});

/// Flat key=value file; '#' starts a comment.
RunConfig load_config(const std::filesystem::path& path);
void load_config_into(RunConfig& cfg, const std::filesystem::path& path);
void write_config(const std::filesystem::path& path, const RunConfig& cfg);

std::vector<double> parse_q_list(const std::string& text);

/// Image intensities in [0, 1].
ScalarField load_image(const RunConfig& cfg);

/// Fitting term for the configured data model.
ScalarField build_fitting(const RunConfig& cfg, const ScalarField& z);

struct SegmentOutcome {
  SolveResult result;
  BinaryMask mask;
};

/// Solves at restriction q and writes u.pgm, mask.pgm, partition.pgm and
/// report.txt into cfg.output_dir.
SegmentOutcome run_segment(const RunConfig& cfg, double q);

struct SweepRecord {
  double q = 0.0;
  double q_hat = 0.0;
  double rd_fraction = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double wall_time_s = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

struct SweepOutcome {
  std::vector<SweepRecord> records;
  GroundTruth ground_truth;
};

/// One record for restriction q against a precomputed reference.
SweepRecord sweep_point(const ScalarField& f, const SolverParams& params, double q,
                        const GroundTruth& gt, int repeats = 1);

/// Reference at q = 1, delta = 1e-10, then one record per cfg.q_list entry.
/// Writes sweep.csv (flushed per row), sweep_summary.txt, gt_u.pgm and
/// gt_mask.pgm into cfg.output_dir.
SweepOutcome run_sweep(const RunConfig& cfg);

/// Mean time over 0 < q < 1 rows with e1 > min_e1, divided by the q = 1
/// time. Empty if either side is missing.
std::optional<double> time_ratio(const std::vector<SweepRecord>& records, double min_e1 = 0.98);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRecord& r);
std::vector<SweepRecord> read_sweep_csv(const std::filesystem::path& path);

}  // namespace rdseg
