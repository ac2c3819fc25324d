// Copyright 2026 The polyaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYAUG_IMAGE_IO_HPP
#define POLYAUG_IMAGE_IO_HPP

// Requires linking libpng and libjpeg.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>

#include "polyaug/error.hpp"
#include "polyaug/raster.hpp"

namespace polyaug {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline ImageBuffer read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw ImageIoError("cannot read PNG " + path.string() + ": " + img.message);
  }
  // Alpha is dropped; palette and 16-bit inputs are expanded to 8-bit.
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(img));
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&img, &background, data.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageIoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return ImageBuffer(static_cast<int>(img.width), static_cast<int>(img.height), channels,
                     std::move(data));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

inline ImageBuffer read_jpeg(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw ImageIoError("cannot open " + path.string());

  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  // Only trivially destructible state lives between setjmp and longjmp.
  std::vector<std::uint8_t>* data = new std::vector<std::uint8_t>();
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    delete data;
    throw ImageIoError("cannot decode JPEG " + path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  const int channels = cinfo.output_components;
  data->resize(static_cast<std::size_t>(w) * h * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = data->data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::unique_ptr<std::vector<std::uint8_t>> owned(data);
  return ImageBuffer(w, h, channels, std::move(*owned));
}

}  // namespace detail

/// Reads a PNG or JPEG file, detected by signature.
inline ImageBuffer read_image(const std::filesystem::path& path) {
  unsigned char sig[8] = {};
  {
    detail::FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw ImageIoError("cannot open " + path.string());
    if (std::fread(sig, 1, sizeof sig, f.get()) < 3) {
      throw ImageIoError("file too short to be an image: " + path.string());
    }
  }
  if (png_sig_cmp(sig, 0, 8) == 0) return detail::read_png(path);
  if (sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) return detail::read_jpeg(path);
  throw ImageIoError("unsupported image format: " + path.string());
}

inline void write_png(const std::filesystem::path& path, const ImageBuffer& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data().data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageIoError("cannot write PNG " + path.string() + ": " + msg);
  }
}

}  // namespace polyaug

#endif  // POLYAUG_IMAGE_IO_HPP
