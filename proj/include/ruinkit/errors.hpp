#pragma once

#include <stdexcept>
#include <string>

namespace ruinkit {

/// Base class for all ruinkit exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model input (rejected before any numerics run).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Numerical failure inside the solver pipeline.
class NumericError : public Error {
public:
    using Error::Error;
};

class NonStochasticAlpha : public ModelError {
public:
    using ModelError::ModelError;
};

class NotSubIntensity : public ModelError {
public:
    using ModelError::ModelError;
};

class SingularB : public ModelError {
public:
    using ModelError::ModelError;
};

class NonpositiveLoading : public ModelError {
public:
    using ModelError::ModelError;
};

class ZeroVolatility : public ModelError {
public:
    using ModelError::ModelError;
};

class DegenerateRoots : public NumericError {
public:
    using NumericError::NumericError;
};

class RootCountMismatch : public NumericError {
public:
    using NumericError::NumericError;
};

class ImaginaryAxisRoot : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularDividedDifference : public NumericError {
public:
    using NumericError::NumericError;
};

class ModelNotInSpecialForm : public NumericError {
public:
    using NumericError::NumericError;
};

class ConsistencyFailure : public NumericError {
public:
    using NumericError::NumericError;
};

/// Model spec file could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace ruinkit
