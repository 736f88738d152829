#include "zdl/errors.hpp"

namespace zdl {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::GammaPole: return "GammaPole";
        case ErrorKind::DenominatorZero: return "DenominatorZero";
        case ErrorKind::ZeroOnPath: return "ZeroOnPath";
        case ErrorKind::FarPointNotDominated: return "FarPointNotDominated";
        case ErrorKind::ZeroOnBoundary: return "ZeroOnBoundary";
        case ErrorKind::SubdivisionLimit: return "SubdivisionLimit";
        case ErrorKind::DualCountMismatch: return "DualCountMismatch";
        case ErrorKind::OverlapConflict: return "OverlapConflict";
        case ErrorKind::CorruptSegment: return "CorruptSegment";
        case ErrorKind::GapsPresent: return "GapsPresent";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Config: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace zdl

#include <cstdio>

#include "zdl/hash.hpp"

namespace zdl {

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace zdl
