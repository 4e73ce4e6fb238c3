/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
/**
 * @file   errors.h
 * @brief  Exception type shared by all mpreg modules.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpreg {

enum class ErrorCode {
    EmptyPointSet,
    InvalidThreshold,
    DegenerateGeometry,
    DegenerateViewpoint,
    SingularHessian,
    NoCorrespondences,
    ParseError,
    UnsupportedFormat,
    MissingModel,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class RegistrationError : public std::runtime_error {
public:
    RegistrationError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code),
          detail_(what)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// Message without the error-code prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace mpreg
