// Copyright 2026 The nccirc Authors
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

// Bit strings. Index 0 is the leftmost printed character and the lowest wire
// label. When a bit string of width n is read as an integer ("state index"),
// index 0 is the most significant bit, so numeric order on indices coincides
// with lexicographic order on the printed strings.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nccirc {

using Bits = std::vector<std::uint8_t>;

inline std::string to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

inline Bits bits_from_string(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("bit string may only contain '0' and '1': \"" +
                                  std::string(text) + "\"");
    }
    out.push_back(ch == '1');
  }
  return out;
}

inline Bits bits_from_index(std::uint64_t index, std::size_t width) {
  Bits out(width);
  for (std::size_t i = 0; i < width; ++i) {
    out[width - 1 - i] = static_cast<std::uint8_t>((index >> i) & 1u);
  }
  return out;
}

inline std::uint64_t index_from_bits(const Bits& bits) {
  if (bits.size() > 64) throw std::invalid_argument("bit string wider than 64 bits");
  std::uint64_t v = 0;
  for (auto b : bits) v = (v << 1) | (b & 1u);
  return v;
}

inline Bits concat(const Bits& a, const Bits& b) {
  Bits out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace nccirc
