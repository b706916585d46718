#include "ifa/image.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

namespace ifa {

Image::Image(int w, int h, int c) : width(w), height(h), channels(c) {
  if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
    throw ImageError("invalid image shape " + std::to_string(w) + "x" +
                     std::to_string(h) + "x" + std::to_string(c));
  }
  samples.assign(static_cast<std::size_t>(w) * h * c, 0);
}

LumaPlane::LumaPlane(int w, int h, double fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) {
    throw ImageError("invalid plane shape");
  }
  samples.assign(static_cast<std::size_t>(w) * h, fill);
}

Kernel2D::Kernel2D(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0 || w % 2 == 0 || h % 2 == 0) {
    throw std::invalid_argument("kernel dimensions must be odd and positive");
  }
  weights.assign(static_cast<std::size_t>(w) * h, 0.0);
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  throw ImageError(std::string("png: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

Image load_png(const std::string& path, std::FILE* fp) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warn_fn);
  if (!png) throw ImageError("png: allocation failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw ImageError("png: allocation failure");
  }

  try {
    png_init_io(png, fp);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);

    if (depth == 16) {
      throw ImageError(path + ": 16-bit PNG not supported");
    }
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    // alpha is dropped; source material is opaque
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
      throw ImageError(path + ": unsupported channel count " +
                       std::to_string(channels));
    }

    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) {
      rows[y] = img.samples.data() + static_cast<std::size_t>(y) * w * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

// Uncompressed 8/24-bit BI_RGB only.
Image load_bmp(const std::string& path, std::FILE* fp) {
  std::vector<std::uint8_t> data;
  std::uint8_t buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), fp)) > 0) {
    data.insert(data.end(), buf, buf + n);
  }
  if (data.size() < 54) throw ImageError(path + ": truncated BMP header");

  const std::uint32_t pixel_offset = le32(&data[10]);
  const std::uint32_t header_size = le32(&data[14]);
  if (header_size < 40) throw ImageError(path + ": unsupported BMP header");
  const std::int32_t w = static_cast<std::int32_t>(le32(&data[18]));
  const std::int32_t h = static_cast<std::int32_t>(le32(&data[22]));
  const std::uint16_t bpp = le16(&data[28]);
  const std::uint32_t compression = le32(&data[30]);
  if (compression != 0) throw ImageError(path + ": compressed BMP not supported");
  if (bpp != 8 && bpp != 24) {
    throw ImageError(path + ": unsupported BMP bit depth " + std::to_string(bpp));
  }
  if (w <= 0 || h == 0) throw ImageError(path + ": bad BMP dimensions");

  const bool top_down = h < 0;
  const int height = top_down ? -h : h;
  const int channels = bpp == 8 ? 1 : 3;
  const std::size_t row_bytes = (static_cast<std::size_t>(w) * (bpp / 8) + 3) & ~std::size_t{3};
  if (data.size() < pixel_offset + row_bytes * height) {
    throw ImageError(path + ": truncated BMP pixel data");
  }

  // 8-bit BMPs carry a palette; require it to be a grayscale identity ramp
  if (bpp == 8) {
    const std::size_t pal_off = 14 + header_size;
    std::uint32_t colors = le32(&data[46]);
    if (colors == 0) colors = 256;
    if (data.size() < pal_off + colors * 4) throw ImageError(path + ": truncated BMP palette");
    for (std::uint32_t i = 0; i < colors; ++i) {
      const std::uint8_t* e = &data[pal_off + i * 4];
      if (e[0] != i || e[1] != i || e[2] != i) {
        throw ImageError(path + ": non-grayscale BMP palette not supported");
      }
    }
  }

  Image img(w, height, channels);
  for (int y = 0; y < height; ++y) {
    const int src_y = top_down ? y : height - 1 - y;
    const std::uint8_t* row = &data[pixel_offset + row_bytes * src_y];
    for (int x = 0; x < w; ++x) {
      if (channels == 1) {
        img.at(x, y, 0) = row[x];
      } else {
        img.at(x, y, 0) = row[x * 3 + 2];  // BMP stores BGR
        img.at(x, y, 1) = row[x * 3 + 1];
        img.at(x, y, 2) = row[x * 3 + 0];
      }
    }
  }
  return img;
}

}  // namespace

Image load_image(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw ImageError(path + ": cannot open file");

  std::uint8_t magic[8] = {0};
  const std::size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
  std::rewind(fp.get());
  if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) {
    return load_png(path, fp.get());
  }
  if (got >= 2 && magic[0] == 'B' && magic[1] == 'M') {
    return load_bmp(path, fp.get());
  }
  throw ImageError(path + ": not a PNG or BMP file");
}

void save_png(const Image& img, const std::string& path) {
  if (img.width <= 0 || img.height <= 0 || (img.channels != 1 && img.channels != 3)) {
    throw ImageError("save_png: invalid image");
  }
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw ImageError(path + ": cannot open for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warn_fn);
  if (!png) throw ImageError("png: allocation failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw ImageError("png: allocation failure");
  }
  try {
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
      png_write_row(png, const_cast<png_bytep>(
          img.samples.data() + static_cast<std::size_t>(y) * img.width * img.channels));
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
}

LumaPlane to_luminance(const Image& img) {
  if (img.channels != 1 && img.channels != 3) {
    throw ImageError("to_luminance: unsupported channel count " +
                     std::to_string(img.channels));
  }
  LumaPlane out(img.width, img.height);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (img.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = img.samples[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t* p = &img.samples[i * 3];
      out.samples[i] = kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2];
    }
  }
  return out;
}

LumaPlane channel_plane(const Image& img, int c) {
  if (c < 0 || c >= img.channels) throw ImageError("channel_plane: bad channel");
  LumaPlane out(img.width, img.height);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = img.samples[i * img.channels + c];
  }
  return out;
}

}  // namespace ifa
