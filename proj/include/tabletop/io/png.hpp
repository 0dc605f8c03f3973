#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tabletop::io {

// Decoded PNG; samples are row-major, interleaved, one entry per channel
// sample regardless of bit depth.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint16_t> samples;
};

std::string encode_png_gray8(int width, int height, std::span<const std::uint8_t> pixels);
std::string encode_png_gray16(int width, int height, std::span<const std::uint16_t> pixels);
std::string encode_png_rgb8(int width, int height, std::span<const std::uint8_t> rgb);

Image decode_png(const std::string& bytes);
Image read_png(const std::filesystem::path& path);

}  // namespace tabletop::io
