#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace placeq {

/** Half-open byte range into a source string, with 1-based line/column of its start. */
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int col = 1;
};

/** Base class of all errors raised by the library. */
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/** Malformed input text; carries the offending span. */
class parse_error : public error {
 public:
  parse_error(const std::string& what, SourceSpan span)
      : error(what + " at line " + std::to_string(span.line) + ", column " +
              std::to_string(span.col)),
        span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/** Well-formed input lying outside the decidable (or implemented) fragment. */
class unsupported_error : public error {
 public:
  using error::error;
};

/** Sort violation: a variable or term used at both sorts, or at the wrong one. */
class sort_error : public error {
 public:
  using error::error;
};

/** Invalid arithmetic request (division by zero, vp at a non-prime, ...). */
class arith_error : public error {
 public:
  using error::error;
};

/** Witness extraction invoked on a formula that turned out to be false. */
class no_witness_error : public error {
 public:
  using error::error;
};

/** Internal invariant breach; any throw of this is a bug. */
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace placeq
