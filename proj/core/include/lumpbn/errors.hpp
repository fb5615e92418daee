#pragma once

#include <stdexcept>
#include <string>

namespace lumpbn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleDetected : Error {
    using Error::Error;
};

struct UnknownVertex : Error {
    using Error::Error;
};

struct UnknownSymbol : Error {
    using Error::Error;
};

struct OverlappingSets : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct IncompatibleLumping : Error {
    using Error::Error;
};

struct ModelTooLarge : Error {
    using Error::Error;
};

struct StructuralPreconditionViolated : Error {
    using Error::Error;
};

// Thrown when two results that a proved implication forces to agree
// disagree; always an implementation bug, never a model property.
struct InternalInconsistency : Error {
    using Error::Error;
};

// Malformed input file; `path` is a JSON-pointer-style location.
struct InputError : Error {
    InputError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path(path) {}
    std::string path;
};

}  // namespace lumpbn
