#pragma once

#include <stdexcept>
#include <string>

namespace modelforge::api {

class ApiError : public std::runtime_error {
public:
  enum class Code {
    CEParseError,
    UnknownConcept,
    UnknownItem,
    AlreadyResolved,
    InvalidEdit,
    Incomplete,
    DuplicateConcept,
    MalformedRequest,
    MalformedQuery,
    NoPlan,
    MissingBinding,
    DomainError,
    StoreCorrupt,
    BindFailure,
  };

  ApiError(Code code, const std::string& message, std::size_t position = 0, std::string expected = {})
      : std::runtime_error(message), code_(code), position_(position), expected_(std::move(expected)) {}

  Code code() const noexcept { return code_; }
  /// CEParseError: byte offset of the offending token; InvalidEdit: offset
  /// into the edited equation.
  std::size_t position() const noexcept { return position_; }
  /// CEParseError: what the grammar wanted there.
  const std::string& expected() const noexcept { return expected_; }

private:
  Code code_;
  std::size_t position_;
  std::string expected_;
};

std::string_view error_code_name(ApiError::Code code);

/// HTTP status used for each code.
int http_status(ApiError::Code code);

}  // namespace modelforge::api
