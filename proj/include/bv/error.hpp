#pragma once

#include <stdexcept>
#include <string>

namespace bv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define BV_DEFINE_ERROR(Name)                                                  \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}       \
  }

BV_DEFINE_ERROR(CeilingExceeded);
BV_DEFINE_ERROR(NotCoprime);
BV_DEFINE_ERROR(NotInSubfield);
BV_DEFINE_ERROR(BadField);
BV_DEFINE_ERROR(UnsupportedFamily);
BV_DEFINE_ERROR(NotUnipotentConsistent);
BV_DEFINE_ERROR(NoAdmissibleLambda);
BV_DEFINE_ERROR(TooManyPoints);
BV_DEFINE_ERROR(BadN);
BV_DEFINE_ERROR(RankOutOfRange);
BV_DEFINE_ERROR(OrderExceedsBound);
BV_DEFINE_ERROR(ZNotExhibited);
BV_DEFINE_ERROR(CapExceeded);
BV_DEFINE_ERROR(InvalidArgument);

#undef BV_DEFINE_ERROR

/// Syntax error at a 0-based offset in a single-line expression.
class ParseError : public Error {
public:
  ParseError(std::size_t position, std::string expected)
      : Error("ParseError at " + std::to_string(position) + ": expected " + expected),
        position_(position), expected_(std::move(expected)) {}
  std::size_t position() const { return position_; }
  const std::string &expected() const { return expected_; }

private:
  std::size_t position_;
  std::string expected_;
};

/// Error in an input file; line and column are 1-based.
class IngestError : public Error {
public:
  IngestError(std::size_t line, std::size_t column, const std::string &msg)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
              ": " + msg),
        line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace bv
