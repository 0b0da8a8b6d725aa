#pragma once

#include <stdexcept>
#include <string>

namespace daga {

/// Bad hyperparameter or malformed experiment configuration.
class InvalidConfigError : public std::runtime_error {
  public:
    explicit InvalidConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Genome kind/length mismatch between operands.
class GenomeTypeError : public std::runtime_error {
  public:
    explicit GenomeTypeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite loss or weights; aborts the run instead of clamping.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structured parse failure. line is 1-based (0 when unknown),
/// offset is the byte position in the input (-1 when unknown).
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, long line, long long offset = -1)
        : std::runtime_error(format(msg, line, offset)), line_(line), offset_(offset) {}

    long line() const { return line_; }
    long long offset() const { return offset_; }

  private:
    static std::string format(const std::string& msg, long line, long long offset) {
        std::string out = msg;
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        if (offset >= 0) out += " (byte " + std::to_string(offset) + ")";
        return out;
    }

    long line_;
    long long offset_;
};

} // namespace daga
