#pragma once

#include <stdexcept>
#include <string>

namespace lmar {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A covariance block is not positive definite, even after jitter.
class SingularMatrixError : public Error {
public:
    explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

// The candidate lag set is empty where a nonempty one is required.
class EmptyLagSetError : public Error {
public:
    explicit EmptyLagSetError(const std::string& what) : Error(what) {}
};

class SeriesTooShortError : public Error {
public:
    explicit SeriesTooShortError(const std::string& what) : Error(what) {}
};

class IndexOutOfRangeError : public Error {
public:
    explicit IndexOutOfRangeError(const std::string& what) : Error(what) {}
};

class HorizonError : public Error {
public:
    explicit HorizonError(const std::string& what) : Error(what) {}
};

class InvalidProbabilityError : public Error {
public:
    explicit InvalidProbabilityError(const std::string& what) : Error(what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

// Malformed input file (unparsable, bad header, bad columns).
class BadInputError : public Error {
public:
    explicit BadInputError(const std::string& what) : Error(what) {}
};

// Input parses but the series is unusable (too short, gapped, non-uniform).
class BadSeriesError : public Error {
public:
    explicit BadSeriesError(const std::string& what) : Error(what) {}
};

}  // namespace lmar
