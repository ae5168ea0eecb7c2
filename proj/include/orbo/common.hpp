#pragma once

#include <stdexcept>
#include <string>

namespace orbo {

// Linear-algebra failure that survived jitter escalation, or an indefinite
// system where a positive definite one was required.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Too few (inlier) observations for the requested fit.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace orbo
