#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "elab/config.hpp"
#include "elab/transforms.hpp"

namespace elab {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Raised for unreadable or unwritable files and malformed data files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip text for a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

inline double parse_double(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw IoError("not a number: '" + tmp + "'");
  return v;
}

inline long long parse_int(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const long long v = std::strtoll(tmp.c_str(), &end, 10);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw IoError("not an integer: '" + tmp + "'");
  return v;
}

/// Label of a transform level as written to the CSV outputs.
inline std::string level_label(const InstanceDescriptor& d) { return format_double(d.level()); }

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string file_checksum(const fs::path& path) { return fnv1a_hex(read_file(path)); }

// ---------------------------------------------------------------- config JSON

inline Json config_to_json(const ExperimentConfig& c) {
  return Json{{"base_seed", c.base_seed},
              {"dimension", c.dimension},
              {"problems", c.problems},
              {"sample_multiple", c.sample_multiple},
              {"repetitions", c.repetitions},
              {"translation_limits", c.translation_limits},
              {"vectors_per_limit", c.vectors_per_limit},
              {"scaling_exponents", c.scaling_exponents},
              {"rotations", c.rotations},
              {"objective_offsets", c.objective_offsets},
              {"objective_exponents", c.objective_exponents},
              {"alpha", c.alpha},
              {"share_designs", c.share_designs},
              {"threads", c.threads},
              {"out_dir", c.out_dir}};
}

/// Missing keys keep their defaults; unknown keys are rejected. A run manifest
/// is accepted too, its "config" member is used.
inline ExperimentConfig config_from_json(const Json& j_in) {
  const Json& j = j_in.contains("config") && j_in.at("config").is_object() ? j_in.at("config") : j_in;
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "base_seed") c.base_seed = value.get<std::uint64_t>();
      else if (key == "dimension") c.dimension = value.get<int>();
      else if (key == "problems") c.problems = value.get<std::vector<int>>();
      else if (key == "sample_multiple") c.sample_multiple = value.get<int>();
      else if (key == "repetitions") c.repetitions = value.get<int>();
      else if (key == "translation_limits") c.translation_limits = value.get<std::vector<double>>();
      else if (key == "vectors_per_limit") c.vectors_per_limit = value.get<int>();
      else if (key == "scaling_exponents") c.scaling_exponents = value.get<std::vector<int>>();
      else if (key == "rotations") c.rotations = value.get<int>();
      else if (key == "objective_offsets") c.objective_offsets = value.get<std::vector<double>>();
      else if (key == "objective_exponents") c.objective_exponents = value.get<std::vector<int>>();
      else if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "share_designs") c.share_designs = value.get<bool>();
      else if (key == "threads") c.threads = value.get<int>();
      else if (key == "out_dir") c.out_dir = value.get<std::string>();
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("config file not found: " + path.string());
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

inline void save_config(const ExperimentConfig& c, const fs::path& path) {
  write_file(path, config_to_json(c).dump(2) + "\n");
}

// ------------------------------------------------------------ descriptor JSON

inline Json descriptor_to_json(const InstanceDescriptor& d) {
  Json offset = Json::array(), rotation = Json::array();
  double factor = 1.0, offset_y = 0.0, factor_y = 1.0;
  if (const auto* t = std::get_if<XTranslation>(&d.spec)) {
    for (double v : t->offset) offset.push_back(v);
  } else if (const auto* s = std::get_if<XScaling>(&d.spec)) {
    factor = s->factor();
  } else if (const auto* r = std::get_if<XRotation>(&d.spec)) {
    for (Eigen::Index i = 0; i < r->matrix.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < r->matrix.cols(); ++k) row.push_back(r->matrix(i, k));
      rotation.push_back(std::move(row));
    }
  } else if (const auto* yt = std::get_if<YTranslation>(&d.spec)) {
    offset_y = yt->offset;
  } else if (const auto* ys = std::get_if<YScaling>(&d.spec)) {
    factor_y = std::ldexp(1.0, ys->exponent);
  }
  return Json{{"problem", to_int(d.problem)},
              {"instance_index", d.instance_index},
              {"kind", std::string(kind_name(d.kind()))},
              {"level_label", level_label(d)},
              {"seed", d.seed},
              {"offset", std::move(offset)},
              {"factor", factor},
              {"rotation", std::move(rotation)},
              {"offset_y", offset_y},
              {"factor_y", factor_y}};
}

inline Json descriptors_to_json(const std::vector<InstanceDescriptor>& all) {
  Json arr = Json::array();
  for (const auto& d : all) arr.push_back(descriptor_to_json(d));
  return arr;
}

}  // namespace elab
