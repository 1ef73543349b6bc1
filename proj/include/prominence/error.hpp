#pragma once

#include <stdexcept>
#include <string>

namespace prominence {

/// Input that violates a data-model invariant or a usage contract.
/// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file or external resource could not be read, written, or resolved.
/// The CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a sentence embedding lookup has no entry for (doc, index).
class MissingVectorError : public ResourceError {
public:
    MissingVectorError(std::string doc_id, std::size_t index)
        : ResourceError("missing sentence vector for (" + doc_id + ", " + std::to_string(index) + ")"),
          doc_id_(std::move(doc_id)),
          index_(index) {}

    const std::string& doc_id() const noexcept { return doc_id_; }
    std::size_t index() const noexcept { return index_; }

private:
    std::string doc_id_;
    std::size_t index_;
};

}  // namespace prominence
