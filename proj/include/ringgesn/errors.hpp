#pragma once

#include <stdexcept>
#include <string>

namespace ringgesn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mandatory dataset file is missing or unreadable.
class LoadError : public Error {
public:
    using Error::Error;
};

/// Dataset files are present but violate the format or a graph invariant.
class MalformedDatasetError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Ridge normal equations could not be solved (singular with beta == 0).
class SolverError : public Error {
public:
    using Error::Error;
};

/// Reservoir state became non-finite while encoding a graph.
class EncodingError : public Error {
public:
    EncodingError(const std::string& what, std::size_t graph_index)
        : Error(what), graph_index_(graph_index) {}

    std::size_t graph_index() const noexcept { return graph_index_; }

private:
    std::size_t graph_index_;
};

/// Invalid protocol or model configuration (bad fold count, empty grid, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

class FetchError : public Error {
public:
    FetchError(const std::string& what, int http_status = 0)
        : Error(what), http_status_(http_status) {}

    /// HTTP status of the failed response, or 0 when no response was received.
    int http_status() const noexcept { return http_status_; }

private:
    int http_status_;
};

class ExtractionError : public Error {
public:
    using Error::Error;
};

}  // namespace ringgesn
