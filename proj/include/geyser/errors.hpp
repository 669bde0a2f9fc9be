#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace geyser {

/// Base class for every error raised by this library.
class GeyserError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed config / mapping file, or invalid option values.
class ConfigError : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// Structurally broken CSV input (unterminated quote, empty file).
class CsvError : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// A mapped column header is absent from the CSV header row.
class MissingColumn : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// A documented operation precondition was violated by the caller.
class PreconditionError : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// Regression input that cannot identify the model (n too small,
/// constant x, constant y where shape is required).
class DegenerateDesign : public GeyserError {
public:
    using GeyserError::GeyserError;
};

class EmptyInput : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// Every record was filtered away; almost always a misconfigured run.
class EmptyResult : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// Records whose end time cannot be resolved (no end, no duration).
class UnresolvableEnd : public GeyserError {
public:
    UnresolvableEnd(const std::string& what, std::vector<std::size_t> indices)
        : GeyserError(what), indices(std::move(indices)) {}
    std::vector<std::size_t> indices;
};

/// Outcome sets passed to accuracy_table cover different eruptions.
class MismatchedActuals : public GeyserError {
public:
    using GeyserError::GeyserError;
};

/// No external prediction resolved to an actual eruption.
class NoMatches : public GeyserError {
public:
    using GeyserError::GeyserError;
};

class NetworkError : public GeyserError {
public:
    using GeyserError::GeyserError;
};

class HttpStatusError : public GeyserError {
public:
    HttpStatusError(const std::string& what, int status)
        : GeyserError(what), status(status) {}
    int status;
};

} // namespace geyser
