#pragma once

#include <stdexcept>
#include <string>

namespace dbar {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimension : Error { using Error::Error; };
struct InvalidGrade : Error { using Error::Error; };
struct NotInGamma : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

struct DegreeExceeded : Error { using Error::Error; };
struct NonpositiveMoment : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };

struct EigensolverFailure : Error { using Error::Error; };
struct PsdViolation : Error { using Error::Error; };

struct InvalidConfig : Error { using Error::Error; };

} // namespace dbar
