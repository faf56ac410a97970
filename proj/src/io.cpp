#include "eigenlocal/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eigenlocal::io {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DenseTensor read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tensor file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("shape") || !j.contains("re") || !j.contains("im")) {
    throw InputError("tensor file " + path + " must contain shape, re and im fields");
  }
  std::vector<index_t> shape;
  try {
    for (const auto& s : j.at("shape")) shape.push_back(s.get<index_t>());
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const index_t n = shape_product(shape);
    if (static_cast<index_t>(re.size()) != n || static_cast<index_t>(im.size()) != n) {
      throw InputError("tensor file " + path + ": re/im lengths do not match the shape");
    }
    std::vector<cplx> data(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
      const double x = re.at(static_cast<std::size_t>(i)).get<double>();
      const double y = im.at(static_cast<std::size_t>(i)).get<double>();
      if (!std::isfinite(x) || !std::isfinite(y)) {
        throw InputError("tensor file " + path + ": non-finite entry at index " +
                         std::to_string(i));
      }
      data[static_cast<std::size_t>(i)] = cplx(x, y);
    }
    return DenseTensor(std::move(shape), std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed tensor file " + path + ": " + e.what());
  } catch (const DimensionError& e) {
    throw InputError("malformed tensor file " + path + ": " + e.what());
  }
}

void write_tensor_file(const std::string& path, const DenseTensor& t) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write tensor file: " + path);
  out << "{\"shape\":[";
  for (index_t k = 0; k < t.rank(); ++k) {
    out << t.shape()[k] << (k + 1 < t.rank() ? "," : "");
  }
  out << "],\"re\":[";
  for (index_t i = 0; i < t.size(); ++i) {
    out << format_double(t.data()[i].real()) << (i + 1 < t.size() ? "," : "");
  }
  out << "],\"im\":[";
  for (index_t i = 0; i < t.size(); ++i) {
    out << format_double(t.data()[i].imag()) << (i + 1 < t.size() ? "," : "");
  }
  out << "]}\n";
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file for hashing: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Report::add_input(const std::string& key, const std::string& path) {
  inputs_.emplace_back(key, "{\"path\":\"" + json_escape(path) + "\",\"hash\":\"" +
                                file_hash(path) + "\"}");
}

void Report::add_number(const std::string& key, double v) {
  results_.emplace_back(key, format_double(v));
}

void Report::add_complex(const std::string& key, cplx v) {
  results_.emplace_back(key, "{\"re\":" + format_double(v.real()) +
                                 ",\"im\":" + format_double(v.imag()) + "}");
}

void Report::add_int(const std::string& key, index_t v) {
  results_.emplace_back(key, std::to_string(v));
}

void Report::add_bool(const std::string& key, bool v) {
  results_.emplace_back(key, v ? "true" : "false");
}

void Report::add_string(const std::string& key, const std::string& v) {
  results_.emplace_back(key, "\"" + json_escape(v) + "\"");
}

void Report::add_number_list(const std::string& key, const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += format_double(v[i]);
    if (i + 1 < v.size()) s += ",";
  }
  s += "]";
  results_.emplace_back(key, s);
}

void Report::add_tolerance(const std::string& key, double v) {
  tolerances_.emplace_back(key, format_double(v));
}

std::string Report::to_json(double wall_time_s) const {
  std::ostringstream os;
  os << "{\"command\":\"" << json_escape(command_) << "\"";
  os << ",\"inputs\":{";
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    os << "\"" << json_escape(inputs_[i].first) << "\":" << inputs_[i].second;
    if (i + 1 < inputs_.size()) os << ",";
  }
  os << "},\"results\":{";
  for (std::size_t i = 0; i < results_.size(); ++i) {
    os << "\"" << json_escape(results_[i].first) << "\":" << results_[i].second;
    if (i + 1 < results_.size()) os << ",";
  }
  os << "},\"tolerances\":{";
  for (std::size_t i = 0; i < tolerances_.size(); ++i) {
    os << "\"" << json_escape(tolerances_[i].first) << "\":" << tolerances_[i].second;
    if (i + 1 < tolerances_.size()) os << ",";
  }
  os << "},\"wall_time_s\":" << format_double(wall_time_s) << "}";
  return os.str();
}

}  // namespace eigenlocal::io
