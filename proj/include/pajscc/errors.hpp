/*
* Copyright (C) 2026 pajscc contributors
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
#ifndef PAJSCC_ERRORS_HPP
#define PAJSCC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pajscc {

/// Base class for every error thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A value passed to an operation violates its precondition.
class invalid_parameter : public error {
public:
    explicit invalid_parameter(const std::string& what) : error(what) {}
};

/// A received packet index is duplicated or out of range.
class corrupt_index : public error {
public:
    explicit corrupt_index(const std::string& what) : error(what) {}
};

/// A send was attempted outside every availability window of a path.
class path_unavailable : public error {
public:
    explicit path_unavailable(const std::string& what) : error(what) {}
};

/// A candidate tuple violates the bandwidth constraints.
class infeasible : public error {
public:
    explicit infeasible(const std::string& what) : error(what) {}
};

/// The candidate path list is empty.
class no_paths : public error {
public:
    explicit no_paths(const std::string& what) : error(what) {}
};

/// A scenario document is not syntactically valid. Carries 1-based line/column.
class parse_error : public error {
public:
    parse_error(const std::string& what, int line, int column)
        : error(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// A scenario document is well-formed but violates one or more invariants.
/// Carries the full list so a user can fix everything in one pass.
class validation_error : public error {
public:
    explicit validation_error(std::vector<std::string> violations)
        : error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid scenario:";
        for (const auto& s : v) {
            out += "\n  - " + s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

} // namespace pajscc

#endif // PAJSCC_ERRORS_HPP
