// Copyright 2026 The segbias authors
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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace segbias {
namespace uni {

// Strict UTF-8 decoding: rejects overlong forms, surrogates and
// codepoints above U+10FFFF. Returns std::nullopt on invalid input.
inline std::optional<std::u32string> try_decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      return std::nullopt;
    }
    if (i + len > s.size()) return std::nullopt;
    for (size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) return std::nullopt;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (len == 2 && cp < 0x80) return std::nullopt;
    if (len == 3 && cp < 0x800) return std::nullopt;
    if (len == 4 && cp < 0x10000) return std::nullopt;
    if (cp >= 0xD800 && cp <= 0xDFFF) return std::nullopt;
    if (cp > 0x10FFFF) return std::nullopt;
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

// Canonical composition pairs for the Latin-1 Supplement and Latin
// Extended-A blocks. Covers the precomposed forms used by French,
// Italian and neighbouring European orthographies; sequences outside
// this table are left as-is.
inline const std::map<std::pair<char32_t, char32_t>, char32_t>& composition_table() {
  static const std::map<std::pair<char32_t, char32_t>, char32_t> table = {
      {{U'A', 0x300}, 0xC0},  {{U'A', 0x301}, 0xC1},  {{U'A', 0x302}, 0xC2},
      {{U'A', 0x303}, 0xC3},  {{U'A', 0x308}, 0xC4},  {{U'A', 0x30A}, 0xC5},
      {{U'C', 0x327}, 0xC7},  {{U'E', 0x300}, 0xC8},  {{U'E', 0x301}, 0xC9},
      {{U'E', 0x302}, 0xCA},  {{U'E', 0x308}, 0xCB},  {{U'I', 0x300}, 0xCC},
      {{U'I', 0x301}, 0xCD},  {{U'I', 0x302}, 0xCE},  {{U'I', 0x308}, 0xCF},
      {{U'N', 0x303}, 0xD1},  {{U'O', 0x300}, 0xD2},  {{U'O', 0x301}, 0xD3},
      {{U'O', 0x302}, 0xD4},  {{U'O', 0x303}, 0xD5},  {{U'O', 0x308}, 0xD6},
      {{U'U', 0x300}, 0xD9},  {{U'U', 0x301}, 0xDA},  {{U'U', 0x302}, 0xDB},
      {{U'U', 0x308}, 0xDC},  {{U'Y', 0x301}, 0xDD},  {{U'a', 0x300}, 0xE0},
      {{U'a', 0x301}, 0xE1},  {{U'a', 0x302}, 0xE2},  {{U'a', 0x303}, 0xE3},
      {{U'a', 0x308}, 0xE4},  {{U'a', 0x30A}, 0xE5},  {{U'c', 0x327}, 0xE7},
      {{U'e', 0x300}, 0xE8},  {{U'e', 0x301}, 0xE9},  {{U'e', 0x302}, 0xEA},
      {{U'e', 0x308}, 0xEB},  {{U'i', 0x300}, 0xEC},  {{U'i', 0x301}, 0xED},
      {{U'i', 0x302}, 0xEE},  {{U'i', 0x308}, 0xEF},  {{U'n', 0x303}, 0xF1},
      {{U'o', 0x300}, 0xF2},  {{U'o', 0x301}, 0xF3},  {{U'o', 0x302}, 0xF4},
      {{U'o', 0x303}, 0xF5},  {{U'o', 0x308}, 0xF6},  {{U'u', 0x300}, 0xF9},
      {{U'u', 0x301}, 0xFA},  {{U'u', 0x302}, 0xFB},  {{U'u', 0x308}, 0xFC},
      {{U'y', 0x301}, 0xFD},  {{U'y', 0x308}, 0xFF},
      {{U'A', 0x304}, 0x100}, {{U'a', 0x304}, 0x101}, {{U'A', 0x306}, 0x102},
      {{U'a', 0x306}, 0x103}, {{U'A', 0x328}, 0x104}, {{U'a', 0x328}, 0x105},
      {{U'C', 0x301}, 0x106}, {{U'c', 0x301}, 0x107}, {{U'C', 0x302}, 0x108},
      {{U'c', 0x302}, 0x109}, {{U'C', 0x307}, 0x10A}, {{U'c', 0x307}, 0x10B},
      {{U'C', 0x30C}, 0x10C}, {{U'c', 0x30C}, 0x10D}, {{U'D', 0x30C}, 0x10E},
      {{U'd', 0x30C}, 0x10F}, {{U'E', 0x304}, 0x112}, {{U'e', 0x304}, 0x113},
      {{U'E', 0x306}, 0x114}, {{U'e', 0x306}, 0x115}, {{U'E', 0x307}, 0x116},
      {{U'e', 0x307}, 0x117}, {{U'E', 0x328}, 0x118}, {{U'e', 0x328}, 0x119},
      {{U'E', 0x30C}, 0x11A}, {{U'e', 0x30C}, 0x11B}, {{U'G', 0x302}, 0x11C},
      {{U'g', 0x302}, 0x11D}, {{U'G', 0x306}, 0x11E}, {{U'g', 0x306}, 0x11F},
      {{U'G', 0x307}, 0x120}, {{U'g', 0x307}, 0x121}, {{U'G', 0x327}, 0x122},
      {{U'g', 0x327}, 0x123}, {{U'H', 0x302}, 0x124}, {{U'h', 0x302}, 0x125},
      {{U'I', 0x303}, 0x128}, {{U'i', 0x303}, 0x129}, {{U'I', 0x304}, 0x12A},
      {{U'i', 0x304}, 0x12B}, {{U'I', 0x306}, 0x12C}, {{U'i', 0x306}, 0x12D},
      {{U'I', 0x328}, 0x12E}, {{U'i', 0x328}, 0x12F}, {{U'I', 0x307}, 0x130},
      {{U'J', 0x302}, 0x134}, {{U'j', 0x302}, 0x135}, {{U'K', 0x327}, 0x136},
      {{U'k', 0x327}, 0x137}, {{U'L', 0x301}, 0x139}, {{U'l', 0x301}, 0x13A},
      {{U'L', 0x327}, 0x13B}, {{U'l', 0x327}, 0x13C}, {{U'L', 0x30C}, 0x13D},
      {{U'l', 0x30C}, 0x13E}, {{U'N', 0x301}, 0x143}, {{U'n', 0x301}, 0x144},
      {{U'N', 0x327}, 0x145}, {{U'n', 0x327}, 0x146}, {{U'N', 0x30C}, 0x147},
      {{U'n', 0x30C}, 0x148}, {{U'O', 0x304}, 0x14C}, {{U'o', 0x304}, 0x14D},
      {{U'O', 0x306}, 0x14E}, {{U'o', 0x306}, 0x14F}, {{U'O', 0x30B}, 0x150},
      {{U'o', 0x30B}, 0x151}, {{U'R', 0x301}, 0x154}, {{U'r', 0x301}, 0x155},
      {{U'R', 0x327}, 0x156}, {{U'r', 0x327}, 0x157}, {{U'R', 0x30C}, 0x158},
      {{U'r', 0x30C}, 0x159}, {{U'S', 0x301}, 0x15A}, {{U's', 0x301}, 0x15B},
      {{U'S', 0x302}, 0x15C}, {{U's', 0x302}, 0x15D}, {{U'S', 0x327}, 0x15E},
      {{U's', 0x327}, 0x15F}, {{U'S', 0x30C}, 0x160}, {{U's', 0x30C}, 0x161},
      {{U'T', 0x327}, 0x162}, {{U't', 0x327}, 0x163}, {{U'T', 0x30C}, 0x164},
      {{U't', 0x30C}, 0x165}, {{U'U', 0x303}, 0x168}, {{U'u', 0x303}, 0x169},
      {{U'U', 0x304}, 0x16A}, {{U'u', 0x304}, 0x16B}, {{U'U', 0x306}, 0x16C},
      {{U'u', 0x306}, 0x16D}, {{U'U', 0x30A}, 0x16E}, {{U'u', 0x30A}, 0x16F},
      {{U'U', 0x30B}, 0x170}, {{U'u', 0x30B}, 0x171}, {{U'U', 0x328}, 0x172},
      {{U'u', 0x328}, 0x173}, {{U'W', 0x302}, 0x174}, {{U'w', 0x302}, 0x175},
      {{U'Y', 0x302}, 0x176}, {{U'y', 0x302}, 0x177}, {{U'Y', 0x308}, 0x178},
      {{U'Z', 0x301}, 0x179}, {{U'z', 0x301}, 0x17A}, {{U'Z', 0x307}, 0x17B},
      {{U'z', 0x307}, 0x17C}, {{U'Z', 0x30C}, 0x17D}, {{U'z', 0x30C}, 0x17E},
  };
  return table;
}

inline bool is_combining_mark(char32_t cp) {
  switch (cp) {
    case 0x300: case 0x301: case 0x302: case 0x303: case 0x304:
    case 0x306: case 0x307: case 0x308: case 0x30A: case 0x30B:
    case 0x30C: case 0x327: case 0x328:
      return true;
    default:
      return false;
  }
}

// Canonical composition over the table above. Input must be valid UTF-8.
inline std::u32string compose(std::u32string_view cps) {
  const auto& table = composition_table();
  std::u32string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    if (!out.empty() && is_combining_mark(cp)) {
      auto it = table.find({out.back(), cp});
      if (it != table.end()) {
        out.back() = it->second;
        continue;
      }
    }
    out.push_back(cp);
  }
  return out;
}

inline std::string nfc(std::string_view utf8) {
  auto cps = try_decode_utf8(utf8);
  if (!cps) return std::string(utf8);
  return encode_utf8(compose(*cps));
}

inline bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Punctuation detached at word edges in "basic" tokenization: ASCII
// punctuation plus the common Latin-script marks (guillemets, curly
// quotes, dashes, ellipsis, inverted marks).
inline bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'!' && cp <= U'/') || (cp >= U':' && cp <= U'@') ||
           (cp >= U'[' && cp <= U'`') || (cp >= U'{' && cp <= U'~');
  }
  switch (cp) {
    case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
    case 0x2039: case 0x203A:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x2038);
  }
}

// Simple per-codepoint lowercase over the Latin ranges; other scripts
// pass through unchanged.
inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xD6) return cp + 32;
  if (cp >= 0xD8 && cp <= 0xDE) return cp + 32;
  if (cp == 0x130) return U'i';
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

inline std::string fold_case(std::string_view utf8) {
  auto cps = try_decode_utf8(utf8);
  if (!cps) return std::string(utf8);
  for (auto& cp : *cps) cp = to_lower(cp);
  return encode_utf8(*cps);
}

// Splits a UTF-8 string into per-codepoint UTF-8 strings.
inline std::vector<std::string> codepoints(std::string_view utf8) {
  auto cps = try_decode_utf8(utf8);
  std::vector<std::string> out;
  if (!cps) return out;
  out.reserve(cps->size());
  for (char32_t cp : *cps) {
    std::string piece;
    append_utf8(piece, cp);
    out.push_back(std::move(piece));
  }
  return out;
}

inline size_t codepoint_count(std::string_view utf8) {
  size_t n = 0;
  for (char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace uni
}  // namespace segbias
