#include "visionflow/engine/run_id.hpp"

#include <chrono>
#include <mutex>
#include <random>

namespace visionflow::engine {

namespace {

constexpr char kAlphabet[] = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

struct State {
  std::mutex mu;
  std::mt19937_64 rng{std::random_device{}()};
  std::uint64_t last_ms = 0;
  std::uint64_t hi = 0;  // 16 bits
  std::uint64_t lo = 0;
};

State& state() {
  static State s;
  return s;
}

}  // namespace

std::string format_run_id(std::uint64_t millis, std::uint64_t rand_hi16, std::uint64_t rand_lo64) {
  std::string out(26, '0');
  std::uint64_t t = millis & ((std::uint64_t{1} << 48) - 1);
  for (int i = 9; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kAlphabet[t & 31];
    t >>= 5;
  }
  // 80 random bits as 16 base32 digits, most significant first.
  std::uint64_t hi = rand_hi16 & 0xFFFF;
  std::uint64_t lo = rand_lo64;
  for (int i = 25; i >= 10; --i) {
    out[static_cast<std::size_t>(i)] = kAlphabet[lo & 31];
    lo = (lo >> 5) | ((hi & 31) << 59);
    hi >>= 5;
  }
  return out;
}

std::string new_run_id() {
  State& s = state();
  std::lock_guard lock(s.mu);
  const auto now = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
          .count());
  if (now > s.last_ms) {
    s.last_ms = now;
    s.hi = s.rng() & 0x7FFF;  // leave headroom for increments
    s.lo = s.rng();
  } else if (++s.lo == 0) {
    // Same (or earlier) millisecond: bump the random part instead.
    ++s.hi;
  }
  return format_run_id(s.last_ms, s.hi, s.lo);
}

bool is_run_id(const std::string& s) noexcept {
  if (s.size() != 26) return false;
  for (char c : s) {
    bool ok = false;
    for (const char* p = kAlphabet; *p; ++p) ok = ok || *p == c;
    if (!ok) return false;
  }
  return s[0] <= '7';
}

}  // namespace visionflow::engine
