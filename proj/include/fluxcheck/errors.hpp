#pragma once

#include <stdexcept>
#include <string>

namespace fluxcheck {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class MissingVariable : public Error {
public:
    using Error::Error;
};

class ChartMismatch : public Error {
public:
    using Error::Error;
};

class DegreeError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

class NonPolynomialInverse : public MetricError {
public:
    using MetricError::MetricError;
};

class InverseMismatch : public MetricError {
public:
    using MetricError::MetricError;
};

class VolumeNotPolynomial : public MetricError {
public:
    using MetricError::MetricError;
};

class NonPolynomialDivision : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace fluxcheck
