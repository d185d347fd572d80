// SPDX-FileCopyrightText: (c) 2026 The multiscopic authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace multiscopic {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad dimensions, ranges, parameters).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// File contents do not follow the expected format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace multiscopic
