#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "wayfind/error.hpp"
#include "wayfind/gridmap.hpp"

namespace wayfind {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

GrayImage decode_png(const std::string& bytes, const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kParseError, "'" + path + "': " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  // Transparent pixels composite onto white, i.e. free space.
  png_color background{255, 255, 255};
  if (!png_image_finish_read(&image, &background, out.pixels.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::kParseError, "'" + path + "': " + message);
  }
  return out;
}

// PGM header tokens may be separated by whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
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

GrayImage decode_pgm(const std::string& bytes, const std::string& path) {
  std::istringstream in(bytes);
  const std::string magic = next_token(in);
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") {
    throw Error(ErrorCode::kParseError, "'" + path + "' is neither PNG nor PGM");
  }
  GrayImage out;
  int maxval = 0;
  try {
    out.width = std::stoi(next_token(in));
    out.height = std::stoi(next_token(in));
    maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParseError, "'" + path + "' has a malformed PGM header");
  }
  if (out.width < 0 || out.height < 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorCode::kParseError, "'" + path + "' has invalid PGM dimensions");
  }
  const std::size_t count =
      static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  out.pixels.resize(count);
  auto rescale = [maxval](int v) {
    return static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
  };
  if (binary) {
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    for (std::size_t k = 0; k < count; ++k) {
      int v = in.get();
      if (bytes_per_sample == 2) v = (v << 8) | in.get();
      if (!in) throw Error(ErrorCode::kParseError, "'" + path + "' is truncated");
      out.pixels[k] = rescale(v);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      const std::string tok = next_token(in);
      if (tok.empty()) throw Error(ErrorCode::kParseError, "'" + path + "' is truncated");
      out.pixels[k] = rescale(std::stoi(tok));
    }
  }
  return out;
}

}  // namespace

GrayImage load_gray_image(const std::string& path) {
  const std::string bytes = read_file(path);
  static constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
    return decode_png(bytes, path);
  }
  return decode_pgm(bytes, path);
}

void save_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write '" + path + "'");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to '" + path + "'");
}

}  // namespace wayfind
