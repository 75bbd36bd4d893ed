#pragma once

#include <stdexcept>
#include <string>

namespace invabc {

/// Malformed or inconsistent external input (files, tables, configs).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / stream failure.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace invabc
