#include "smtt/sequence_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "smtt/errors.hpp"

namespace smtt {

namespace fs = std::filesystem;

std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".png") {
      frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return frames;
}

std::string frame_filename(int index_one_based) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06d.pgm", index_one_based);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

TargetBox parse_box_line(std::string_view line, int line_no) {
  std::array<double, 4> v{};
  std::size_t field = 0;
  while (true) {
    const auto comma = line.find(',');
    const std::string_view token = trim(line.substr(0, comma));
    if (field >= v.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected 4 comma-separated values");
    }
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v[field]);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() ||
        !std::isfinite(v[field])) {
      throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(token) + "'");
    }
    ++field;
    if (comma == std::string_view::npos) {
      break;
    }
    line.remove_prefix(comma + 1);
  }
  if (field != v.size()) {
    throw InputError("line " + std::to_string(line_no) + ": expected 4 comma-separated values");
  }
  if (!(v[2] > 0.0) || !(v[3] > 0.0)) {
    throw InputError("line " + std::to_string(line_no) + ": box width and height must be positive");
  }
  return TargetBox::from_corner(v[0], v[1], v[2], v[3]);
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') {
    s.pop_back();
  }
  if (!s.empty() && s.back() == '.') {
    s.pop_back();
  }
  if (s == "-0") {
    s = "0";
  }
  return s;
}

}  // namespace

std::vector<TargetBox> parse_boxes(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    lines.push_back(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) {
    lines.pop_back();
  }
  std::vector<TargetBox> boxes;
  boxes.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    boxes.push_back(parse_box_line(lines[i], static_cast<int>(i + 1)));
  }
  return boxes;
}

std::vector<TargetBox> read_boxes(const fs::path& path) {
  try {
    return parse_boxes(read_text(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string format_box(const TargetBox& box) {
  return format_value(box.left()) + ',' + format_value(box.top()) + ',' + format_value(box.w) + ',' +
         format_value(box.h);
}

std::string format_boxes(const std::vector<TargetBox>& boxes) {
  std::string out;
  for (const auto& b : boxes) {
    out += format_box(b);
    out += '\n';
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

void draw_box(Image& image, const TargetBox& box, double intensity) {
  const int x0 = static_cast<int>(std::floor(box.left()));
  const int y0 = static_cast<int>(std::floor(box.top()));
  const int x1 = static_cast<int>(std::ceil(box.right())) - 1;
  const int y1 = static_cast<int>(std::ceil(box.bottom())) - 1;
  auto put = [&image, intensity](int x, int y) {
    if (x >= 0 && y >= 0 && x < image.width() && y < image.height()) {
      image.at(x, y) = intensity;
    }
  };
  for (int x = x0; x <= x1; ++x) {
    put(x, y0);
    put(x, y1);
  }
  for (int y = y0; y <= y1; ++y) {
    put(x0, y);
    put(x1, y);
  }
}

}  // namespace smtt
