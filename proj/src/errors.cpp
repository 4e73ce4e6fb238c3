/* -------------------------------------------------------------------------
 *  mpreg: multi-primitive rigid registration (points, lines, planes)
 * ------------------------------------------------------------------------- */
#include <mpreg/errors.h>

namespace mpreg {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
        case ErrorCode::EmptyPointSet: return "EmptyPointSet";
        case ErrorCode::InvalidThreshold: return "InvalidThreshold";
        case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorCode::DegenerateViewpoint: return "DegenerateViewpoint";
        case ErrorCode::SingularHessian: return "SingularHessian";
        case ErrorCode::NoCorrespondences: return "NoCorrespondences";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::MissingModel: return "MissingModel";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace mpreg
