#ifndef OPTOMECH_ERROR_HPP
#define OPTOMECH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace optomech {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  Io,
  Unstable,
  Unphysical,
};

// Every failure raised by the library derives from Error so that the C layer
// can translate it into a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::InvalidArgument, what) {}
};

class ParseError : public Error {
 public:
  /// line 0 refers to the file as a whole (e.g. a missing key).
  ParseError(const std::string& origin, int line, const std::string& key,
             const std::string& what)
      : Error(ErrorKind::Parse, format(origin, line, key, what)), line_(line), key_(key) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& origin, int line, const std::string& key,
                            const std::string& what) {
    std::string out = origin;
    if (line > 0) out += ":" + std::to_string(line);
    if (!key.empty()) out += ": " + key;
    return out + ": " + what;
  }

  int line_;
  std::string key_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class UnphysicalInput : public Error {
 public:
  explicit UnphysicalInput(const std::string& what)
      : Error(ErrorKind::Unphysical, what) {}
};

}  // namespace optomech

#endif  // OPTOMECH_ERROR_HPP
