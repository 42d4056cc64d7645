#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asgmkg {

// Root of every error the library raises. `kind()` is the machine-readable
// name the CLI and HTTP layer report.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ASGMKG_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

ASGMKG_DEFINE_ERROR(EmptyLabel);
ASGMKG_DEFINE_ERROR(MalformedIri);
ASGMKG_DEFINE_ERROR(CorpusFormatError);
ASGMKG_DEFINE_ERROR(DuplicatePage);
ASGMKG_DEFINE_ERROR(LlmUnavailable);
ASGMKG_DEFINE_ERROR(LlmMalformedOutput);
ASGMKG_DEFINE_ERROR(AuthError);
ASGMKG_DEFINE_ERROR(SearchUnavailable);
ASGMKG_DEFINE_ERROR(RateLimited);
ASGMKG_DEFINE_ERROR(PageRankUnavailable);
ASGMKG_DEFINE_ERROR(FetchFailure);
ASGMKG_DEFINE_ERROR(ProtocolError);
ASGMKG_DEFINE_ERROR(ReplayMiss);
ASGMKG_DEFINE_ERROR(LengthMismatch);
ASGMKG_DEFINE_ERROR(EmptyMatrix);
ASGMKG_DEFINE_ERROR(UnknownTripleId);
ASGMKG_DEFINE_ERROR(NoOpCorrection);
ASGMKG_DEFINE_ERROR(NoOverlap);
ASGMKG_DEFINE_ERROR(UnknownEntity);
ASGMKG_DEFINE_ERROR(InvalidArgument);
ASGMKG_DEFINE_ERROR(ConfigError);

#undef ASGMKG_DEFINE_ERROR

// Errors that point at a line (or row) of an input file.
class LocatedError : public Error {
 public:
  LocatedError(std::string kind, std::size_t line, const std::string& message)
      : Error(std::move(kind), "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public LocatedError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : LocatedError("ParseError", line, message) {}
};

class BenchmarkFormatError : public LocatedError {
 public:
  BenchmarkFormatError(std::size_t row, const std::string& message)
      : LocatedError("BenchmarkFormatError", row, message) {}
  std::size_t row() const noexcept { return line(); }
};

class CorruptLog : public LocatedError {
 public:
  CorruptLog(const std::string& file, std::size_t line, const std::string& message)
      : LocatedError("CorruptLog", line, file + ": " + message), file_(file) {}
  const std::string& file() const noexcept { return file_; }

 private:
  std::string file_;
};

}  // namespace asgmkg
