#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace csl {

/// 64-bit FNV-1a. Used for mesh fingerprints and config hashes; stable across
/// platforms, not cryptographic.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

}  // namespace csl
