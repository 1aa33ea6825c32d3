#pragma once

#include <stdexcept>
#include <string>

namespace penning {

// Each category maps onto one CLI exit code (see tools/penning_cli.cpp).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhysicsDomainError : public std::runtime_error {
 public:
  PhysicsDomainError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline PhysicsDomainError trap_instability(const std::string& detail) {
  return {"trap_instability", "trap unstable: " + detail};
}

}  // namespace penning
