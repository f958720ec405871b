#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wittkit {

// Thrown when an enumeration would exceed the configured guard.
struct GuardExceeded : std::runtime_error {
    explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Global enumeration guard. Checks that an exhaustive loop of `count`
// iterations is allowed; reads WITTKIT_GUARD once at startup.
std::uint64_t enumeration_guard();
void set_enumeration_guard(std::uint64_t g);
void check_guard(std::uint64_t count, const char* where);

bool is_prime(std::uint64_t m);

// p^e with overflow check against 2^62.
std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp);

std::uint64_t binomial_u64(std::uint32_t n, std::uint32_t k);

// Deterministic RNG for sampled checks (splitmix64).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed = 0) : state(seed + 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

}  // namespace wittkit
