#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "xsess/types.hpp"

namespace xsess {

// Checked JSON access: every key must be consumed, unknown keys are errors.
class ConfigReader {
 public:
  ConfigReader(const nlohmann::json& j, std::string context)
      : j_(j), context_(std::move(context)) {
    if (!j_.is_object() && !j_.is_null()) fail(context_ + ": expected a JSON object");
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (j_.is_null() || !j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(context_ + "." + key + ": " + e.what());
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return !j_.is_null() && j_.contains(key);
  }

  nlohmann::json sub(const std::string& key) {
    seen_.insert(key);
    if (j_.is_null() || !j_.contains(key)) return nlohmann::json(nullptr);
    return j_.at(key);
  }

  // Call once all keys are read; throws on anything unconsumed.
  void finish() const {
    if (j_.is_null()) return;
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (!seen_.count(key)) fail(context_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const nlohmann::json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

}  // namespace xsess
