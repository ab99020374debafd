// Copyright 2026 The Postlog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace postlog {

/// Domain failure raised by any pipeline stage (bad machine, broken promise, underflow, ...).
class PostlogError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Machine file syntax or structure problem, carrying a 1-based source position.
class ParseError : public PostlogError {
   public:
    ParseError(size_t line, size_t column, const std::string &message);

    size_t line() const {
        return line_;
    }
    size_t column() const {
        return column_;
    }

   private:
    size_t line_;
    size_t column_;
};

}  // namespace postlog
