/*
 * Copyright 2026 The stancegp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace stancegp {

/// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or incompatible options (CLI exit code 1).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

/// Factorization failure or an unrecoverable numerical condition (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace stancegp
