#include "smtt/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "smtt/errors.hpp"

namespace smtt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::string& lookup(const KeyValues& kv, std::string_view key) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw InputError("missing key '" + std::string(key) + "'");
  }
  return it->second;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw InputError("line " + std::to_string(line_no) + ": empty key");
    }
    if (!out.emplace(std::move(key), std::move(value)).second) {
      throw InputError("line " + std::to_string(line_no) + ": duplicate key");
    }
  }
  return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_key_values(buf.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

double to_double(const KeyValues& kv, std::string_view key) {
  const std::string& s = lookup(kv, key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("key '" + std::string(key) + "': not a number: '" + s + "'");
  }
  return v;
}

long long to_integer(const KeyValues& kv, std::string_view key) {
  const std::string& s = lookup(kv, key);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("key '" + std::string(key) + "': not an integer: '" + s + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::pair<int, int> parse_patch(std::string_view text) {
  const auto x = text.find_first_of("xX");
  int h = 0;
  int w = 0;
  if (x != std::string_view::npos) {
    const auto r1 = std::from_chars(text.data(), text.data() + x, h);
    const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), w);
    if (r1.ec == std::errc() && r1.ptr == text.data() + x && r2.ec == std::errc() &&
        r2.ptr == text.data() + text.size() && h > 0 && w > 0) {
      return {h, w};
    }
  }
  throw InputError("patch size must look like HxW, got '" + std::string(text) + "'");
}

SolverMethod parse_method(std::string_view text) {
  if (text == "apg") return SolverMethod::kApg;
  if (text == "alt") return SolverMethod::kAlternating;
  if (text == "subgrad") return SolverMethod::kSubgradient;
  throw InputError("unknown solver '" + std::string(text) + "' (expected apg, alt or subgrad)");
}

std::string_view method_name(SolverMethod method) {
  switch (method) {
    case SolverMethod::kAlternating:
      return "alt";
    case SolverMethod::kSubgradient:
      return "subgrad";
    case SolverMethod::kApg:
      break;
  }
  return "apg";
}

void apply_tracker_keys(TrackerConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "lambda1") {
      cfg.solver.lambda1 = to_double(kv, key);
    } else if (key == "lambda2") {
      cfg.solver.lambda2 = to_double(kv, key);
    } else if (key == "p") {
      cfg.solver.p = static_cast<int>(to_integer(kv, key));
    } else if (key == "q") {
      cfg.solver.q = static_cast<int>(to_integer(kv, key));
    } else if (key == "mu") {
      cfg.solver.mu = to_double(kv, key);
    } else if (key == "step") {
      if (value == "auto") {
        cfg.solver.step.reset();
      } else {
        cfg.solver.step = to_double(kv, key);
      }
    } else if (key == "max_iter") {
      cfg.solver.max_iter = static_cast<int>(to_integer(kv, key));
    } else if (key == "tol") {
      cfg.solver.tol = to_double(kv, key);
    } else if (key == "solver") {
      cfg.method = parse_method(value);
    } else if (key == "particles") {
      cfg.n_particles = static_cast<int>(to_integer(kv, key));
    } else if (key == "std_x") {
      cfg.stds.x = to_double(kv, key);
    } else if (key == "std_y") {
      cfg.stds.y = to_double(kv, key);
    } else if (key == "std_scale") {
      cfg.stds.scale = to_double(kv, key);
    } else if (key == "alpha") {
      cfg.alpha = to_double(kv, key);
    } else if (key == "patch") {
      std::tie(cfg.dictionary.patch_h, cfg.dictionary.patch_w) = parse_patch(value);
    } else if (key == "templates") {
      cfg.dictionary.templates = static_cast<int>(to_integer(kv, key));
    } else if (key == "update_period") {
      cfg.dictionary.update_period = static_cast<int>(to_integer(kv, key));
    } else if (key == "jitter") {
      cfg.dictionary.jitter_px = to_double(kv, key);
    } else if (key == "sigma") {
      if (value == "auto") {
        cfg.sigma_override.reset();
      } else {
        cfg.sigma_override = to_double(kv, key);
      }
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_integer(kv, key));
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
}

std::string to_text(const TrackerConfig& cfg) {
  std::ostringstream out;
  out << "lambda1=" << format_number(cfg.solver.lambda1) << '\n'
      << "lambda2=" << format_number(cfg.solver.lambda2) << '\n'
      << "p=" << cfg.solver.p << '\n'
      << "q=" << cfg.solver.q << '\n'
      << "mu=" << format_number(cfg.solver.mu) << '\n'
      << "step=" << (cfg.solver.step ? format_number(*cfg.solver.step) : "auto") << '\n'
      << "max_iter=" << cfg.solver.max_iter << '\n'
      << "tol=" << format_number(cfg.solver.tol) << '\n'
      << "solver=" << method_name(cfg.method) << '\n'
      << "particles=" << cfg.n_particles << '\n'
      << "std_x=" << format_number(cfg.stds.x) << '\n'
      << "std_y=" << format_number(cfg.stds.y) << '\n'
      << "std_scale=" << format_number(cfg.stds.scale) << '\n'
      << "alpha=" << format_number(cfg.alpha) << '\n'
      << "patch=" << cfg.dictionary.patch_h << 'x' << cfg.dictionary.patch_w << '\n'
      << "templates=" << cfg.dictionary.templates << '\n'
      << "update_period=" << cfg.dictionary.update_period << '\n'
      << "jitter=" << format_number(cfg.dictionary.jitter_px) << '\n'
      << "sigma=" << (cfg.sigma_override ? format_number(*cfg.sigma_override) : "auto") << '\n'
      << "seed=" << cfg.seed << '\n';
  return out.str();
}

}  // namespace smtt
