#include "griff/common.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace griff {

namespace {

std::string joinViolations(const std::vector<std::string>& violations) {
  std::string out = "validation failed";
  for (const std::string& v : violations) {
    out += "; ";
    out += v;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(joinViolations(violations)),
      violations_(std::move(violations)) {}

void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) {
    sink->push_back(std::move(message));
  }
}

std::string formatFixed(double value, int decimals) {
  // NaN and infinities have no fixed-point form; callers decide how to render
  // missing values, so surface them verbatim.
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string jsonEscape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\b':
        out += "\\b";
        break;
      case '\f':
        out += "\\f";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

std::vector<unsigned char> readBinaryFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path);
  }
  std::vector<unsigned char> bytes;
  char chunk[4096];
  while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
    bytes.insert(bytes.end(), chunk, chunk + in.gcount());
  }
  if (in.bad()) {
    throw IoError("error while reading file: " + path);
  }
  return bytes;
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) {
    throw IoError("error while reading file: " + path);
  }
  return out.str();
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open file for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("error while writing file: " + path);
  }
}

}  // namespace griff
