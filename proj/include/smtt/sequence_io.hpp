#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smtt/image.hpp"
#include "smtt/patch.hpp"

namespace smtt {

// Image files (.pgm / .png) in `dir`, in lexicographic filename order.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

// "frame_000001.pgm" for index 1.
std::string frame_filename(int index_one_based);

// Parses "x,y,w,h" lines (top-left corner). Blank trailing lines are
// ignored; anything else unparseable is an InputError naming the line.
std::vector<TargetBox> parse_boxes(std::string_view text);
std::vector<TargetBox> read_boxes(const std::filesystem::path& path);

// "x,y,w,h" with at most two fractional digits and no trailing zeros.
std::string format_box(const TargetBox& box);

// One LF-terminated line per box.
std::string format_boxes(const std::vector<TargetBox>& boxes);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// One-pixel outline of `box` at the given intensity.
void draw_box(Image& image, const TargetBox& box, double intensity);

}  // namespace smtt
