#include "resrwa/error.hpp"

namespace resrwa {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::UnsupportedKnotCount: return "UnsupportedKnotCount";
        case ErrorKind::DegenerateVariable: return "DegenerateVariable";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::DuplicateName: return "DuplicateName";
        case ErrorKind::ControlInInteraction: return "ControlInInteraction";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NonBinaryResponse: return "NonBinaryResponse";
        case ErrorKind::ConstantResponse: return "ConstantResponse";
        case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::MalformedCoefficientTable: return "MalformedCoefficientTable";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::DataError: return "DataError";
    }
    return "Unknown";
}

}  // namespace resrwa
