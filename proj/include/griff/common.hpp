#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace griff {

/// Raised when input bytes or text cannot be parsed into a domain value.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a file cannot be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised by the baseline aligner when no anchor can be found at all.
class UnalignableError : public std::runtime_error {
 public:
  explicit UnalignableError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a (score, performance, alignment) triple fails validation.
/// Carries the full violation list; what() joins them into one message.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Non-fatal diagnostics collected by parsers and loaders.
using Warnings = std::vector<std::string>;

/// Appends a message to the sink when one is provided.
void warn(Warnings* sink, std::string message);

/// Renders value with exactly `decimals` digits after the decimal point.
std::string formatFixed(double value, int decimals);

/// Escapes a string for embedding in a JSON string literal (no quotes added).
std::string jsonEscape(const std::string& text);

std::vector<unsigned char> readBinaryFile(const std::string& path);
std::string readTextFile(const std::string& path);
void writeTextFile(const std::string& path, const std::string& content);

}  // namespace griff
