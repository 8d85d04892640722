#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "multigait/autodiff.hpp"

namespace multigait {

// Versioned binary container of named float64 arrays plus opaque byte blobs
// (optimizer state, RNG streams, curriculum records). Arrays are stored with
// shape headers in column-major order.
struct Container {
  std::vector<std::pair<std::string, ad::Mat>> arrays;
  std::vector<std::pair<std::string, std::string>> blobs;

  void addArray(const std::string& name, ad::Mat m) {
    arrays.emplace_back(name, std::move(m));
  }
  void addBlob(const std::string& name, std::string data) {
    blobs.emplace_back(name, std::move(data));
  }
  const ad::Mat* findArray(const std::string& name) const;
  const std::string* findBlob(const std::string& name) const;
};

void writeContainer(const std::filesystem::path& path, const Container& c);
Container readContainer(const std::filesystem::path& path);

// Every parameter of the store, prefixed (e.g. "params/actor.w0").
void storeParams(Container& c, const std::string& prefix,
                 const ad::ParamStore& params);
// Loads values back into an already-constructed store (shapes must match).
void loadParams(const Container& c, const std::string& prefix,
                ad::ParamStore& params);

}  // namespace multigait
