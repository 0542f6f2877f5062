// Copyright (c) 2026 ATPC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace atpc {

// Base error for everything the toolkit raises on bad inputs or bad files.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents; carries the offending line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, long line, const std::string& detail)
      : Error(format(file, line, detail)), file_(file), line_(line) {}

  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  static std::string format(const std::string& file, long line,
                            const std::string& detail) {
    std::ostringstream os;
    os << file;
    if (line > 0) os << ":" << line;
    os << ": " << detail;
    return os.str();
  }

  std::string file_;
  long line_;
};

}  // namespace atpc
