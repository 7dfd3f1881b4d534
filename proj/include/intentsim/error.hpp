// Copyright 2026 The intentsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace intentsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A document or structured value does not match its schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A caller violated an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A state invariant was found broken (corrupted input or a logic bug).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Model output could not be parsed into the requested structure.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A simulated user message revealed intent text it is not allowed to express.
class LeakageError : public Error {
public:
    using Error::Error;
};

}  // namespace intentsim
