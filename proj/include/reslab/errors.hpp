#ifndef RESLAB_ERRORS_HPP
#define RESLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace reslab {

// All fatal conditions surface as exceptions derived from Error; the C API
// translates them into error codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A truncated symbol does not carry enough certified degrees for the
// requested operation floor.
struct FloorUnreachable : Error {
  explicit FloorUnreachable(const std::string& msg) : Error(msg) {}
};

// A residue (or other degree extraction) was requested below the certified
// validity floor.
struct InsufficientDepth : Error {
  explicit InsufficientDepth(const std::string& msg) : Error(msg) {}
};

struct NotElliptic : Error {
  explicit NotElliptic(const std::string& msg) : Error(msg) {}
};

struct TailNotRational : Error {
  explicit TailNotRational(const std::string& msg) : Error(msg) {}
};

struct RadiusTooSmall : Error {
  explicit RadiusTooSmall(const std::string& msg) : Error(msg) {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

struct ResolutionError : Error {
  explicit ResolutionError(const std::string& msg) : Error(msg) {}
};

}  // namespace reslab

#endif
