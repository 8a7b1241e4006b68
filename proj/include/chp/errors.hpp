#pragma once

#include <stdexcept>
#include <string>

namespace chp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed nets, markings or documents.
struct StructureError : Error {
  using Error::Error;
};

// Firing a transition that is not enabled.
struct FiringError : Error {
  using Error::Error;
};

// Contact violation met while exploring a net assumed contact-free.
struct ContactError : Error {
  using Error::Error;
};

// Label rewrite collides with an existing label.
struct RelabelError : Error {
  using Error::Error;
};

// A result would exceed an explicit cap.
struct ResourceError : Error {
  using Error::Error;
};

// Run enumeration on a cyclic state space needs an event bound.
struct BoundRequiredError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace chp
