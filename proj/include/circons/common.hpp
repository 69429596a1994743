// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace circons {

/// A document or argument violates a structural invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input document could not be parsed at all.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A filesystem operation failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace circons
