#include "retrainer/nn/container.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "retrainer/errors.hpp"

namespace retrainer::nn {

void ModelContainer::add_tensor(const std::string& name, const Matrix& m) {
  entries_.push_back(Entry{name, m.rows, m.cols, m.a});
}

void ModelContainer::add_tensor(const std::string& name, const Vector& v) {
  entries_.push_back(Entry{name, 0, static_cast<int>(v.size()), v});
}

const ModelContainer::Entry& ModelContainer::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw IoError("model container: missing tensor '" + name + "'");
}

bool ModelContainer::has_tensor(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return true;
  }
  return false;
}

void ModelContainer::get_tensor(const std::string& name, Matrix& out) const {
  const Entry& e = find(name);
  if (e.rows == 0) throw IoError("model container: '" + name + "' is not a matrix");
  out.rows = e.rows;
  out.cols = e.cols;
  out.a = e.data;
}

void ModelContainer::get_tensor(const std::string& name, Vector& out) const {
  const Entry& e = find(name);
  if (e.rows != 0) throw IoError("model container: '" + name + "' is not a vector");
  out = e.data;
}

void ModelContainer::save(const std::string& path) const {
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["attrs"] = attrs;
  auto& table = header["tensors"] = nlohmann::json::array();
  for (const auto& e : entries_) {
    table.push_back({{"name", e.name}, {"rows", e.rows}, {"cols", e.cols}});
  }
  const std::string head = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  const std::uint32_t len = static_cast<std::uint32_t>(head.size());
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  for (const auto& e : entries_) {
    out.write(reinterpret_cast<const char*>(e.data.data()),
              static_cast<std::streamsize>(e.data.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

ModelContainer ModelContainer::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("'" + path + "' is not a model container (bad magic)");
  }
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  std::string head(len, '\0');
  in.read(head.data(), len);
  if (!in) throw IoError("'" + path + "': truncated header");

  nlohmann::json header = nlohmann::json::parse(head, nullptr, false);
  if (header.is_discarded()) throw IoError("'" + path + "': corrupt header");
  if (header.value("format_version", -1) != kFormatVersion) {
    throw IoError("'" + path + "': unsupported container version");
  }

  ModelContainer c;
  c.attrs = header.value("attrs", nlohmann::json::object());
  for (const auto& t : header["tensors"]) {
    Entry e;
    e.name = t.at("name").get<std::string>();
    e.rows = t.at("rows").get<int>();
    e.cols = t.at("cols").get<int>();
    const std::size_t n = (e.rows == 0 ? 1 : static_cast<std::size_t>(e.rows)) *
                          static_cast<std::size_t>(e.cols);
    e.data.resize(n);
    in.read(reinterpret_cast<char*>(e.data.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw IoError("'" + path + "': truncated tensor payload");
    c.entries_.push_back(std::move(e));
  }
  return c;
}

}  // namespace retrainer::nn
