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

#include <string>
#include <string_view>

namespace atpc {

// All scoring, matching and matrix vocabularies operate on Unicode scalar
// values, not bytes. These helpers convert between UTF-8 byte strings and
// codepoint strings. Invalid UTF-8 raises Error.

std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view codepoints);
std::string encode_utf8(char32_t codepoint);

// Number of codepoints in a UTF-8 string.
std::size_t codepoint_count(std::string_view bytes);

}  // namespace atpc
