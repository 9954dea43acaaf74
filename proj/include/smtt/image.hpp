#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace smtt {

// Grayscale image with intensities in [0, 1], stored row-major.
//
// Continuous coordinates follow the half-open pixel convention: pixel (x, y)
// covers [x, x+1) x [y, y+1) and its center sits at (x + 0.5, y + 0.5).
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  double& at(int x, int y) { return pixels_[index(x, y)]; }
  double at(int x, int y) const { return pixels_[index(x, y)]; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  // Bilinear interpolation at continuous position (u, v). Coordinates are
  // clamped to the image so reads outside the frame repeat the border.
  double sample(double u, double v) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

// 8-bit quantization used by every writer: round(clamp(v, 0, 1) * 255).
unsigned char to_byte(double v);

// Binary PGM (P5, maxval 255).
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image& image);

// 8-bit grayscale PNG. Color PNGs are converted to luminance on read.
Image read_png(const std::filesystem::path& path);

// Dispatches on extension (.pgm or .png).
Image read_image(const std::filesystem::path& path);

}  // namespace smtt
