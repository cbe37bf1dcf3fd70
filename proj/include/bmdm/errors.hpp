#pragma once

#include <stdexcept>
#include <string>

namespace bmdm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario file could not be read as the documented key/value format.
struct ParseError : Error {
  using Error::Error;
};

// A scenario field violates a documented invariant; `field` names it.
struct ValidationError : Error {
  explicit ValidationError(const std::string& field_name, const std::string& detail)
      : Error("invalid field '" + field_name + "': " + detail), field(field_name) {}
  std::string field;
};

struct DegenerateGeometry : Error {
  using Error::Error;
};

struct AmbiguousRange : Error {
  using Error::Error;
};

struct ZeroSignal : Error {
  using Error::Error;
};

struct DegenerateFit : Error {
  using Error::Error;
};

struct MissingFrame : Error {
  explicit MissingFrame(int frame_index)
      : Error("zero-magnitude phasor at frame " + std::to_string(frame_index)),
        frame(frame_index) {}
  int frame;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace bmdm
