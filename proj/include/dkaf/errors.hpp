#pragma once

#include <stdexcept>
#include <string>

namespace dkaf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct GraphSizeMismatch : Error {
    using Error::Error;
};

struct NotSquare : Error {
    using Error::Error;
};

struct NegativeEntry : Error {
    using Error::Error;
};

struct RowSumViolation : Error {
    using Error::Error;
};

struct ZeroNodes : Error {
    using Error::Error;
};

struct NonFiniteInput : Error {
    using Error::Error;
};

struct NumericalBreakdown : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct NonSymmetricInput : Error {
    using Error::Error;
};

struct NegativeVariance : Error {
    using Error::Error;
};

struct NonPositiveKernelMean : Error {
    using Error::Error;
};

struct EmptySampler : Error {
    using Error::Error;
};

struct EmptyTrace : Error {
    using Error::Error;
};

struct SequenceTooShort : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace dkaf
