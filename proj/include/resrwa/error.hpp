#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resrwa {

enum class ErrorKind {
    InvalidArgument,
    UnsupportedKnotCount,
    DegenerateVariable,
    MissingColumn,
    DuplicateName,
    ControlInInteraction,
    RankDeficient,
    NonBinaryResponse,
    ConstantResponse,
    ZeroVarianceColumn,
    DegenerateFit,
    MalformedCoefficientTable,
    ConfigError,
    DataError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. Messages name the offending
/// column or term whenever one is known.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix, for wrapping in another Error.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace resrwa
