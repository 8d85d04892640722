#include "multigait/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace multigait {

namespace {

constexpr char kMagic[4] = {'M', 'G', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void writeU32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void writeU64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t readU32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::uint64_t readU64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void writeString(std::ostream& out, const std::string& s) {
  writeU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string readString(std::istream& in) {
  const std::uint32_t n = readU32(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  return s;
}

}  // namespace

const ad::Mat* Container::findArray(const std::string& name) const {
  for (const auto& [n, m] : arrays) {
    if (n == name) return &m;
  }
  return nullptr;
}

const std::string* Container::findBlob(const std::string& name) const {
  for (const auto& [n, b] : blobs) {
    if (n == name) return &b;
  }
  return nullptr;
}

void writeContainer(const std::filesystem::path& path, const Container& c) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  writeU32(out, kVersion);
  writeU64(out, c.arrays.size());
  for (const auto& [name, m] : c.arrays) {
    writeString(out, name);
    writeU64(out, static_cast<std::uint64_t>(m.rows()));
    writeU64(out, static_cast<std::uint64_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
  }
  writeU64(out, c.blobs.size());
  for (const auto& [name, data] : c.blobs) {
    writeString(out, name);
    writeU64(out, data.size());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Container readContainer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw std::runtime_error("not a checkpoint container: " + path.string());
  }
  const std::uint32_t version = readU32(in);
  if (version != kVersion) {
    throw std::runtime_error("unsupported container version " +
                             std::to_string(version));
  }
  Container c;
  const std::uint64_t narrays = readU64(in);
  for (std::uint64_t i = 0; i < narrays; ++i) {
    std::string name = readString(in);
    const auto rows = static_cast<Eigen::Index>(readU64(in));
    const auto cols = static_cast<Eigen::Index>(readU64(in));
    ad::Mat m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    c.arrays.emplace_back(std::move(name), std::move(m));
  }
  const std::uint64_t nblobs = readU64(in);
  for (std::uint64_t i = 0; i < nblobs; ++i) {
    std::string name = readString(in);
    const std::uint64_t size = readU64(in);
    std::string data(size, '\0');
    in.read(data.data(), static_cast<std::streamsize>(size));
    c.blobs.emplace_back(std::move(name), std::move(data));
  }
  if (!in) throw std::runtime_error("truncated container: " + path.string());
  return c;
}

void storeParams(Container& c, const std::string& prefix,
                 const ad::ParamStore& params) {
  for (const auto& name : params.names()) {
    c.addArray(prefix + "/" + name, params.at(name));
  }
}

void loadParams(const Container& c, const std::string& prefix,
                ad::ParamStore& params) {
  for (const auto& name : params.names()) {
    const ad::Mat* m = c.findArray(prefix + "/" + name);
    if (m == nullptr) {
      throw std::runtime_error("container is missing parameter " + name);
    }
    ad::Mat& dst = params.at(name);
    if (m->rows() != dst.rows() || m->cols() != dst.cols()) {
      throw std::runtime_error("container shape mismatch for " + name);
    }
    dst = *m;
  }
}

}  // namespace multigait
