#include "wittkit/common.hpp"

#include <atomic>
#include <cstdlib>

namespace wittkit {

namespace {
std::atomic<std::uint64_t> g_guard{0};

std::uint64_t initial_guard() {
    if (const char* env = std::getenv("WITTKIT_GUARD")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 1ull << 22;
}
}  // namespace

std::uint64_t enumeration_guard() {
    std::uint64_t g = g_guard.load(std::memory_order_relaxed);
    if (g == 0) {
        g = initial_guard();
        g_guard.store(g, std::memory_order_relaxed);
    }
    return g;
}

void set_enumeration_guard(std::uint64_t g) { g_guard.store(g, std::memory_order_relaxed); }

void check_guard(std::uint64_t count, const char* where) {
    if (count > enumeration_guard())
        throw GuardExceeded(std::string(where) + ": enumeration of " + std::to_string(count) +
                            " elements exceeds guard " + std::to_string(enumeration_guard()));
}

bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    for (std::uint64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > (1ull << 62) / base) throw std::overflow_error("pow_u64 overflow");
        r *= base;
    }
    return r;
}

std::uint64_t binomial_u64(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

}  // namespace wittkit
