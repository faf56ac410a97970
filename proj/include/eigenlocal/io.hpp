#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eigenlocal/tensor.hpp"

namespace eigenlocal::io {

/// JSON tensor document: {"shape": [...], "re": [...], "im": [...]},
/// row-major data, re/im of length product(shape).
DenseTensor read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const DenseTensor& t);

/// FNV-1a 64-bit hash of the file bytes, as "fnv1a64:<hex>".
std::string file_hash(const std::string& path);

/// Machine-readable command report. Rendering is deterministic: insertion
/// order is preserved and every floating value carries 17 significant
/// digits.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void add_input(const std::string& key, const std::string& path);
  void add_number(const std::string& key, double v);
  void add_complex(const std::string& key, cplx v);
  void add_int(const std::string& key, index_t v);
  void add_bool(const std::string& key, bool v);
  void add_string(const std::string& key, const std::string& v);
  void add_number_list(const std::string& key, const std::vector<double>& v);
  void add_tolerance(const std::string& key, double v);

  std::string to_json(double wall_time_s) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> inputs_;   // key -> rendered object
  std::vector<std::pair<std::string, std::string>> results_;  // key -> rendered value
  std::vector<std::pair<std::string, std::string>> tolerances_;
};

std::string format_double(double v);

}  // namespace eigenlocal::io
