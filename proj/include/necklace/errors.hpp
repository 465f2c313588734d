#pragma once

#include <stdexcept>
#include <string>

namespace necklace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that does not parse or violates a schema/structural rule.
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// A resource or resolution cap was hit before an answer was reached.
/// Never a topological verdict.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// n_of_cut was asked about a point set that is not a cut.
class NotACut : public Error {
public:
    using Error::Error;
};

/// Construction parameters outside their admissible region.
class ParameterError : public Error {
public:
    using Error::Error;
};

} // namespace necklace
