#pragma once

#include <stdexcept>
#include <string>

namespace vn {

// Invalid configuration or model parameters supplied by the caller.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The canonical scheme was asked to enumerate more partitions than allowed.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a file failed, or its contents were malformed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vn
