#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "retrainer/nn/tensor.hpp"

namespace retrainer::nn {

// Versioned model snapshot: 4-byte magic "NNC1", a little-endian u32 header
// length, a JSON header carrying attributes plus the shape table, then the
// tensor payload as raw little-endian doubles in table order.
//
// Attributes hold everything that is not a weight: model kind, window size,
// calibrated thresholds, normalization bounds, version counters.
class ModelContainer {
 public:
  static constexpr char kMagic[4] = {'N', 'N', 'C', '1'};
  static constexpr int kFormatVersion = 1;

  nlohmann::json attrs = nlohmann::json::object();

  void add_tensor(const std::string& name, const Matrix& m);
  void add_tensor(const std::string& name, const Vector& v);

  // Lookup by name; throws IoError when missing or shaped differently.
  void get_tensor(const std::string& name, Matrix& out) const;
  void get_tensor(const std::string& name, Vector& out) const;
  bool has_tensor(const std::string& name) const;

  std::size_t tensor_count() const { return entries_.size(); }

  void save(const std::string& path) const;
  static ModelContainer load(const std::string& path);

 private:
  struct Entry {
    std::string name;
    int rows = 0;  // rows == 0 means flat vector
    int cols = 0;
    Vector data;
  };
  const Entry& find(const std::string& name) const;
  std::vector<Entry> entries_;
};

}  // namespace retrainer::nn
