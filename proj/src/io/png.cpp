#include "tabletop/io/png.hpp"

#include <png.h>

#include <cstring>

#include "tabletop/error.hpp"
#include "tabletop/io/tree.hpp"

namespace tabletop::io {
namespace {

void on_write(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void on_flush(png_structp) {}

void on_error(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  *text = message;
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

std::string encode(int width, int height, int color_type, int bit_depth, int channels,
                   const std::uint8_t* data, std::size_t sample_bytes) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "empty image");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::IoError, "png allocation failed");
  }
  std::string out;
  const std::size_t stride = static_cast<std::size_t>(width) * channels * sample_bytes;
  std::vector<std::uint8_t> row(stride);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "png encode: " + message);
  }
  png_set_write_fn(png, &out, on_write, on_flush);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* src = data + y * stride;
    if (sample_bytes == 2) {
      // PNG stores 16-bit samples big-endian.
      for (std::size_t i = 0; i < stride; i += 2) {
        std::uint16_t v;
        std::memcpy(&v, src + i, 2);
        row[i] = static_cast<std::uint8_t>(v >> 8);
        row[i + 1] = static_cast<std::uint8_t>(v & 0xff);
      }
    } else {
      std::memcpy(row.data(), src, stride);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void check_size(int width, int height, std::size_t have, int channels) {
  if (width < 0 || height < 0 ||
      have != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer does not match image size");
  }
}

struct ReadState {
  const std::string* bytes;
  std::size_t offset;
};

void on_read(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (state->offset + length > state->bytes->size()) png_error(png, "truncated data");
  std::memcpy(data, state->bytes->data() + state->offset, length);
  state->offset += length;
}

}  // namespace

std::string encode_png_gray8(int width, int height, std::span<const std::uint8_t> pixels) {
  check_size(width, height, pixels.size(), 1);
  return encode(width, height, PNG_COLOR_TYPE_GRAY, 8, 1, pixels.data(), 1);
}

std::string encode_png_gray16(int width, int height, std::span<const std::uint16_t> pixels) {
  check_size(width, height, pixels.size(), 1);
  return encode(width, height, PNG_COLOR_TYPE_GRAY, 16, 1,
                reinterpret_cast<const std::uint8_t*>(pixels.data()), 2);
}

std::string encode_png_rgb8(int width, int height, std::span<const std::uint8_t> rgb) {
  check_size(width, height, rgb.size(), 3);
  return encode(width, height, PNG_COLOR_TYPE_RGB, 8, 3, rgb.data(), 1);
}

Image decode_png(const std::string& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8)) {
    throw Error(ErrorCode::UnsupportedFormat, "not a PNG stream");
  }
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::IoError, "png allocation failed");
  }
  ReadState state{&bytes, 0};
  Image image;
  std::vector<std::uint8_t> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoError, "png decode: " + message);
  }
  png_set_read_fn(png, &state, on_read);
  png_read_info(png, info);
  png_set_palette_to_rgb(png);
  png_read_update_info(png, info);
  image.width = static_cast<int>(png_get_image_width(png, info));
  image.height = static_cast<int>(png_get_image_height(png, info));
  image.channels = png_get_channels(png, info);
  image.bit_depth = png_get_bit_depth(png, info);
  row.resize(png_get_rowbytes(png, info));
  const std::size_t per_row = static_cast<std::size_t>(image.width) * image.channels;
  image.samples.reserve(per_row * image.height);
  for (int y = 0; y < image.height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (std::size_t i = 0; i < per_row; ++i) {
      image.samples.push_back(image.bit_depth == 16
                                  ? static_cast<std::uint16_t>((row[2 * i] << 8) | row[2 * i + 1])
                                  : row[i]);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

Image read_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

}  // namespace tabletop::io
