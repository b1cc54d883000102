#pragma once

#include <stdexcept>
#include <string>

namespace numerov {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation outside a model's domain (e.g. the Coulomb singularity at x <= 0).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

} // namespace numerov
