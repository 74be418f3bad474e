#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xsess/neural/params.hpp"

namespace xsess {

// Versioned binary tensor dump: magic, format version, a JSON header with
// model kind / metadata / tensor shapes, then raw little-endian doubles.
// Reload is bit-exact.
struct Checkpoint {
  std::string model_kind;
  nlohmann::json meta;
  std::vector<std::pair<std::string, Matrix>> tensors;

  const Matrix& tensor(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const std::string& model_kind,
                     const nlohmann::json& meta, const ParamRefs& tensors);
Checkpoint load_checkpoint(const std::string& path);

// Copies checkpoint tensors into an existing layout; shapes must match.
void restore_params(const Checkpoint& ck, const ParamRefs& refs);

}  // namespace xsess
