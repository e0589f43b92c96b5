#pragma once

#include <stdexcept>
#include <string>

namespace fbmou {

/// Thrown when a numerical procedure fails beyond its tolerance
/// (eigensolver non-convergence, indefinite covariance, cancellation).
class numerical_failure : public std::runtime_error {
public:
    explicit numerical_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fbmou
