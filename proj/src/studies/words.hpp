#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace reprind::detail {

/// All words over {0..k-1} of length <= maxLen: by length, then
/// lexicographically with the first letter most significant.
inline std::vector<std::vector<std::uint32_t>> wordsUpTo(std::size_t k, std::size_t maxLen) {
  std::vector<std::vector<std::uint32_t>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= maxLen; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::uint32_t c = 0; c < k; ++c) {
        auto w = out[i];
        w.push_back(c);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

inline std::vector<std::string> letterLabels(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(k <= 26 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i));
  return out;
}

inline std::vector<std::string> numberLabels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace reprind::detail
