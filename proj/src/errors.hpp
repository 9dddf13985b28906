#pragma once

#include <stdexcept>
#include <string>

namespace puzlog {

enum class ErrorCode {
    InvalidArgument,
    Parse,
    UnknownSymbol,
    Duplicate,
    Range,
    Io,
    Schema,
    VocabViolation,
    InconsistentKb,
    NotFound,
    Auth,
    Transport,
    Timeout,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace puzlog
