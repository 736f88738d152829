#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zdl {

enum class ErrorKind {
    PoleProximity,
    PrecisionExhausted,
    GammaPole,
    DenominatorZero,
    ZeroOnPath,
    FarPointNotDominated,
    ZeroOnBoundary,
    SubdivisionLimit,
    DualCountMismatch,
    OverlapConflict,
    CorruptSegment,
    GapsPresent,
    InvalidArgument,
    Config,
};

std::string_view to_string(ErrorKind kind);

/// Every failure surfaced by the library. `point` is set when the failure is
/// tied to a location in the complex plane (a zero on a path, a pole, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<std::complex<double>> point = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), point_(point) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::optional<std::complex<double>>& point() const noexcept { return point_; }

private:
    ErrorKind kind_;
    std::optional<std::complex<double>> point_;
};

}  // namespace zdl
