#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rdseg/fitting.hpp"
#include "rdseg/pgm.hpp"

namespace rdseg {

enum class SynthKind { kDisk, kBlobs, kConcave };

SynthKind parse_synth_kind(std::string_view name);
std::string_view synth_kind_name(SynthKind kind);

/// Test image with known layout.
///   disk:    one smooth shape.
///   blobs:   several components of mixed size, including small specks.
///   concave: a C-shaped target with markers, plus distractor shapes at the
///            same intensity that only a marker-selective fitting rejects.
struct SynthImage {
  GrayImage image;
  Field<std::uint8_t> truth;  // noise-free foreground layout, 0/1
  std::uint8_t hi = 0;        // foreground level
  std::uint8_t lo = 0;        // background level
  std::optional<MarkerSet> markers;
};

struct SynthOptions {
  double noise_sigma = 0.0;  // Gaussian noise, 8-bit intensity units
  double edge_sigma = 0.0;   // Gaussian blur of the layout; 0 keeps hard edges
  double shading = 0.0;      // amplitude of a smooth illumination ramp, 8-bit units
  std::uint64_t seed = 0;
};

/// Deterministic for a given seed. Requires width, height >= 16 and
/// nonnegative options. With edge_sigma = shading = noise_sigma = 0 the
/// image holds exactly the two levels hi and lo.
SynthImage make_synth(SynthKind kind, Eigen::Index width, Eigen::Index height,
                      const SynthOptions& opts);

inline SynthImage make_synth(SynthKind kind, Eigen::Index width, Eigen::Index height,
                             double noise_sigma, std::uint64_t seed) {
  return make_synth(kind, width, height, SynthOptions{noise_sigma, 0.0, 0.0, seed});
}

}  // namespace rdseg
