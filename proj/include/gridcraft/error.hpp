#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridcraft {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfZone : public Error {
 public:
  OutOfZone(const std::string& what, std::size_t command_index)
      : Error(what), command_index_(command_index) {}
  std::size_t command_index() const noexcept { return command_index_; }

 private:
  std::size_t command_index_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class PlanError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EpisodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridcraft
