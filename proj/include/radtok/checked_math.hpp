#pragma once

#include <cstdint>
#include <string>

#include "radtok/error.hpp"

namespace radtok::checked {

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("element count overflows 64 bits (" + std::to_string(a) + " * " +
                        std::to_string(b) + ")");
  }
  return out;
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("element count overflows 64 bits (" + std::to_string(a) + " + " +
                        std::to_string(b) + ")");
  }
  return out;
}

template <typename... Ts>
std::uint64_t mul(std::uint64_t a, std::uint64_t b, Ts... rest) {
  return mul(mul(a, b), rest...);
}

template <typename... Ts>
std::uint64_t add(std::uint64_t a, std::uint64_t b, Ts... rest) {
  return add(add(a, b), rest...);
}

}  // namespace radtok::checked
