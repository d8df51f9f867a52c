#pragma once

#include <cstdint>
#include <string>

namespace visionflow::engine {

/// 26-character Crockford base32 id: 48-bit millisecond timestamp followed by
/// 80 random bits. Ids made by one process are strictly increasing, also
/// within the same millisecond.
std::string new_run_id();

/// Deterministic variant for tests.
std::string format_run_id(std::uint64_t millis, std::uint64_t rand_hi16, std::uint64_t rand_lo64);

bool is_run_id(const std::string& s) noexcept;

}  // namespace visionflow::engine
