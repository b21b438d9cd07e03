/* Copyright 2026 The rfglove Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfglove {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Storage could not be read or written. The in-memory state that issued
/// the request is left as it was before the call.
class PersistenceError : public Error {
public:
    using Error::Error;
};

/// A text input (index file, script, CSV) did not parse. `line()` is
/// 1-based; 0 means the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A structured document (scenario JSON) violated its schema. `path()` names
/// the offending field, e.g. `objects[3].material`.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Numerical input outside the domain of a statistic (zero variance,
/// empty sample, mismatched shapes).
class StatsError : public Error {
public:
    using Error::Error;
};

}  // namespace rfglove
