#include "rdseg/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

namespace rdseg {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long parse_header_int(std::istream& in, const std::filesystem::path& path, const char* what) {
  const std::string tok = next_token(in);
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed PGM header in '" + path.string() + "': bad " + what + " '" + tok +
                  "'");
  }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image '" + path.string() + "'");
  const std::string magic = next_token(in);
  if (magic != "P5" && magic != "P2")
    throw IoError("'" + path.string() + "' is not a P2/P5 PGM image");
  const long w = parse_header_int(in, path, "width");
  const long h = parse_header_int(in, path, "height");
  const long maxval = parse_header_int(in, path, "maxval");
  if (w < 1 || h < 1) throw IoError("PGM '" + path.string() + "' has zero dimension");
  if (maxval < 1 || maxval > 255)
    throw IoError("PGM '" + path.string() + "' must be 8-bit (maxval <= 255)");

  GrayImage img(h, w);
  const long n = w * h;
  if (magic == "P5") {
    // next_token consumed exactly one whitespace byte after maxval.
    in.read(reinterpret_cast<char*>(img.data()), n);
    if (in.gcount() != n) throw IoError("PGM '" + path.string() + "' is truncated");
  } else {
    for (long k = 0; k < n; ++k) {
      const long v = parse_header_int(in, path, "pixel value");
      if (v < 0 || v > maxval) throw IoError("PGM '" + path.string() + "' pixel out of range");
      img.data()[k] = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (long k = 0; k < n; ++k)
      img.data()[k] = static_cast<std::uint8_t>((img.data()[k] * 255 + maxval / 2) / maxval);
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image '" + path.string() + "'");
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()), img.size());
  if (!out) throw IoError("failed writing image '" + path.string() + "'");
}

ScalarField to_unit(const GrayImage& img) { return img.cast<double>() / 255.0; }

GrayImage from_unit(const ScalarField& x) {
  return (x.max(0.0).min(1.0) * 255.0).round().cast<std::uint8_t>();
}

GrayImage mask_to_image(const Field<std::uint8_t>& mask) {
  return (mask != 0).select(GrayImage::Constant(mask.rows(), mask.cols(), 255),
                            GrayImage::Zero(mask.rows(), mask.cols()));
}

Field<std::uint8_t> image_to_mask(const GrayImage& img) { return (img != 0).cast<std::uint8_t>(); }

}  // namespace rdseg
