#pragma once

#include <stdexcept>
#include <string>

namespace epmd {

// Input/configuration problems (CLI exit code 2).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failures during computation (CLI exit code 3).
struct ExecutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedRecord : ValidationError {
    using ValidationError::ValidationError;
};
struct UnknownAttribute : ValidationError {
    using ValidationError::ValidationError;
};
struct DuplicateEpisodeId : ValidationError {
    using ValidationError::ValidationError;
};
struct UnmappedCategory : ValidationError {
    using ValidationError::ValidationError;
};
struct InvalidConfig : ValidationError {
    using ValidationError::ValidationError;
};
struct SubsetTooLarge : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyCorpus : ValidationError {
    using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct NoNeighbors : ExecutionError {
    using ExecutionError::ExecutionError;
};
struct EmptyGraph : ValidationError {
    using ValidationError::ValidationError;
};
struct SingularSystem : ExecutionError {
    using ExecutionError::ExecutionError;
};
struct TooFewSamples : ValidationError {
    using ValidationError::ValidationError;
};
struct OneClassOnly : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyInput : ValidationError {
    using ValidationError::ValidationError;
};
struct IdMisalignment : ValidationError {
    using ValidationError::ValidationError;
};
struct MissingProvenance : ValidationError {
    using ValidationError::ValidationError;
};
struct TooFewPairs : ValidationError {
    using ValidationError::ValidationError;
};
struct TestLabelAccess : ExecutionError {
    using ExecutionError::ExecutionError;
};

}  // namespace epmd
