// rdseg: restricted-domain two-phase segmentation.
//
//   rdseg synth   --kind disk|blobs|concave [--width W --height H --noise S --seed N] --out DIR
//   rdseg segment --config FILE [--q Q] [overrides...] --out DIR
//   rdseg sweep   --config FILE [--q-list 0,0.5,1] [--serial|--parallel] --out DIR
//   rdseg metrics A.pgm B.pgm [--e2]
//
// Exit status: 0 success, 1 usage/config error, 2 I/O error,
// 3 non-convergence with --strict.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "rdseg/bench.hpp"
#include "rdseg/metrics.hpp"
#include "rdseg/pgm.hpp"
#include "rdseg/synth.hpp"

namespace fs = std::filesystem;
using namespace rdseg;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNotConverged = 3;

// Defaults written into the run.cfg next to each synthetic image.
constexpr double kSuggestedLambda = 20.0;
constexpr double kSuggestedGamma = 1.0;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> image;
  std::optional<std::string> fitting;
  std::optional<std::string> markers;
  std::optional<double> c1, c2, gamma;
  std::optional<double> lambda, theta, tau, delta, epsilon;
  std::optional<int> max_outer, inner_steps;
  std::optional<std::string> norm;
  std::optional<std::string> out;
  std::optional<long long> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key=value run configuration");
    app->add_option("--image", image, "input PGM image");
    app->add_option("--fitting", fitting, "chan_vese or selective");
    app->add_option("--markers", markers, "marker file (row col per line)");
    app->add_option("--c1", c1, "foreground intensity in [0,1]");
    app->add_option("--c2", c2, "background intensity in [0,1]");
    app->add_option("--gamma", gamma, "weight of the marker distance term");
    app->add_option("--lambda", lambda, "fitting weight");
    app->add_option("--theta", theta, "splitting parameter");
    app->add_option("--tau", tau, "fixed-point step, at most 1/8");
    app->add_option("--delta", delta, "stopping tolerance");
    app->add_option("--epsilon", epsilon, "threshold for the final mask");
    app->add_option("--max-outer", max_outer, "outer iteration cap");
    app->add_option("--inner-steps", inner_steps, "rho steps per outer iteration");
    app->add_option("--norm", norm, "stopping norm: rms, l2 or max");
    app->add_option("--out", out, "output directory");
    app->add_option("--seed", seed, "seed recorded in the configuration");
  }

  RunConfig build() const {
    RunConfig cfg;
    if (config) load_config_into(cfg, *config);
    auto set = [&](const char* key, const auto& opt) {
      if (!opt) return;
      if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, std::string>)
        apply_setting(cfg, key, *opt);
      else
        apply_setting(cfg, key, std::to_string(*opt));
    };
    set("image_path", image);
    set("fitting_kind", fitting);
    set("markers_path", markers);
    if (c1) cfg.c1 = *c1;
    if (c2) cfg.c2 = *c2;
    if (gamma) cfg.gamma = *gamma;
    if (lambda) cfg.solver.lambda = *lambda;
    if (theta) cfg.solver.theta = *theta;
    if (tau) cfg.solver.tau = *tau;
    if (delta) cfg.solver.delta = *delta;
    if (epsilon) cfg.solver.epsilon = *epsilon;
    set("max_outer", max_outer);
    set("inner_steps", inner_steps);
    set("norm", norm);
    set("output_dir", out);
    set("seed", seed);
    return cfg;
  }
};

int cmd_synth(const std::string& kind_name, int width, int height, SynthOptions opts,
              long long seed, const std::string& out_dir) {
  const SynthKind kind = parse_synth_kind(kind_name);
  if (seed < 0) throw InvalidInput("seed must be nonnegative");
  opts.seed = static_cast<std::uint64_t>(seed);
  const SynthImage s = make_synth(kind, width, height, opts);
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");

  write_pgm(dir / "image.pgm", s.image);
  write_pgm(dir / "truth.pgm", mask_to_image(s.truth));

  RunConfig cfg;
  cfg.image_path = "image.pgm";
  cfg.c1 = s.hi / 255.0;
  cfg.c2 = s.lo / 255.0;
  cfg.solver.lambda = kSuggestedLambda;
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.output_dir = "results";
  if (s.markers) {
    write_markers(dir / "markers.txt", *s.markers);
    cfg.fitting_kind = FittingKind::kSelective;
    cfg.markers_path = "markers.txt";
    cfg.gamma = kSuggestedGamma;
  }
  write_config(dir / "run.cfg", cfg);
  std::cout << "wrote " << (dir / "image.pgm").string() << " (hi=" << int(s.hi)
            << ", lo=" << int(s.lo) << ")\n";
  return 0;
}

int cmd_segment(const Overrides& ov, double q, bool strict) {
  const RunConfig cfg = ov.build();
  const SegmentOutcome o = run_segment(cfg, q);
  const auto& r = o.result.report;
  std::printf("q=%g q_hat=%.6g rd_fraction=%.4f iterations=%d converged=%s energy=%.6g time=%.3fs\n",
              q, o.result.partition.q_hat, o.result.partition.rd_fraction, r.outer_iterations,
              r.converged ? "true" : "false", r.energy, r.wall_time);
  return (strict && !r.converged) ? kExitNotConverged : 0;
}

int cmd_sweep(const Overrides& ov, const std::optional<std::string>& q_list, bool parallel,
              std::optional<int> repeats, std::optional<int> gt_max_outer, bool strict) {
  RunConfig cfg = ov.build();
  if (gt_max_outer) apply_setting(cfg, "gt_max_outer", std::to_string(*gt_max_outer));
  if (q_list) cfg.q_list = parse_q_list(*q_list);
  cfg.parallel = parallel;
  if (repeats) apply_setting(cfg, "repeats", std::to_string(*repeats));
  const SweepOutcome o = run_sweep(cfg);
  std::printf("%6s %10s %8s %8s %12s %9s %7s\n", "q", "q_hat", "rd", "E1", "E2", "time[s]", "iters");
  bool all_converged = o.ground_truth.report.converged;
  for (const auto& r : o.records) {
    std::printf("%6.3g %10.4g %8.4f %8.3f %12.3e %9.3f %7d%s\n", r.q, r.q_hat, r.rd_fraction, r.e1,
                r.e2, r.wall_time_s, r.outer_iterations, r.converged ? "" : "  (not converged)");
    all_converged = all_converged && r.converged;
  }
  if (const auto ratio = time_ratio(o.records))
    std::printf("mean time (E1 > 0.98, 0 < q < 1) / time(q = 1) = %.3f\n", *ratio);
  return (strict && !all_converged) ? kExitNotConverged : 0;
}

int cmd_metrics(const std::string& a, const std::string& b, bool e2) {
  const GrayImage ia = read_pgm(a);
  const GrayImage ib = read_pgm(b);
  if (ia.rows() != ib.rows() || ia.cols() != ib.cols())
    throw InvalidInput("metrics: image dimensions differ");
  const double value =
      e2 ? l2_difference(to_unit(ia), to_unit(ib)) : tanimoto(image_to_mask(ia), image_to_mask(ib));
  std::printf("%.6f\n", value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted-domain two-phase segmentation"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "generate a synthetic test image");
  std::string kind = "disk", synth_out = ".";
  int width = 128, height = 128;
  SynthOptions synth_opts;
  synth_opts.noise_sigma = 10.0;
  synth_opts.edge_sigma = 2.0;
  synth_opts.shading = 10.0;
  long long synth_seed = 1;
  synth->add_option("--kind", kind, "disk, blobs or concave")->capture_default_str();
  synth->add_option("--width", width)->capture_default_str();
  synth->add_option("--height", height)->capture_default_str();
  synth->add_option("--noise", synth_opts.noise_sigma, "Gaussian noise sigma (8-bit units)")
      ->capture_default_str();
  synth->add_option("--edge", synth_opts.edge_sigma, "edge blur sigma in pixels (0 = hard edges)")
      ->capture_default_str();
  synth->add_option("--shading", synth_opts.shading, "illumination ramp amplitude (8-bit units)")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--out", synth_out, "output directory")->capture_default_str();

  auto* segment = app.add_subcommand("segment", "segment one image at restriction q");
  Overrides seg_ov;
  seg_ov.attach(segment);
  double seg_q = 1.0;
  bool seg_strict = false;
  segment->add_option("--q", seg_q, "fraction of pixels in the restricted domain")
      ->capture_default_str();
  segment->add_flag("--strict", seg_strict, "exit 3 if the solver does not converge");

  auto* sweep = app.add_subcommand("sweep", "accuracy and timing over a list of q values");
  Overrides sw_ov;
  sw_ov.attach(sweep);
  std::optional<std::string> q_list;
  bool parallel = false, serial = false, sw_strict = false;
  std::optional<int> repeats, gt_max_outer;
  sweep->add_option("--q-list,--q", q_list, "comma-separated q values");
  auto* par = sweep->add_flag("--parallel", parallel, "run q values concurrently (no timing)");
  sweep->add_flag("--serial", serial, "run q values one at a time (default)")->excludes(par);
  sweep->add_option("--repeats", repeats, "best-of-N timing per q");
  sweep->add_option("--gt-max-outer", gt_max_outer, "iteration cap for the reference solve");
  sweep->add_flag("--strict", sw_strict, "exit 3 if any solve does not converge");

  auto* metrics = app.add_subcommand("metrics", "E1 of two masks, or E2 of two fields");
  std::string ma, mb;
  bool e2 = false;
  metrics->add_option("a", ma, "first PGM")->required();
  metrics->add_option("b", mb, "second PGM")->required();
  metrics->add_flag("--e2", e2, "sum of squared differences of the [0,1] fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(kind, width, height, synth_opts, synth_seed, synth_out);
    if (*segment) return cmd_segment(seg_ov, seg_q, seg_strict);
    if (*sweep) return cmd_sweep(sw_ov, q_list, parallel, repeats, gt_max_outer, sw_strict);
    if (*metrics) return cmd_metrics(ma, mb, e2);
  } catch (const IoError& e) {
    std::cerr << "rdseg: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InvalidInput& e) {
    std::cerr << "rdseg: invalid input: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
