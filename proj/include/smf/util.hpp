#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace smf {

using Q = mpq_class;
using Z = mpz_class;

struct CharacterMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDivisible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AllZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoMatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Underdetermined : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Z binom(long n, long k) {
    if (k < 0 || k > n) return Z(0);
    Z r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline Z factorial(long n) {
    Z r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

// Largest s with s*s <= n (n >= 0).
inline long isqrt(long n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    long s = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

inline Q parse_rational(const std::string& s) {
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline std::string rational_str(const Q& q) { return q.get_str(); }

// Bernoulli numbers B_0..B_n (B_1 = -1/2 convention).
inline std::vector<Q> bernoulli_upto(int n) {
    std::vector<Q> b(n + 1);
    for (int m = 0; m <= n; ++m) {
        Q acc(0);
        for (int k = 0; k < m; ++k) acc += Q(binom(m + 1, k)) * b[k];
        b[m] = -acc / Q(m + 1);
        if (m == 0) b[0] = 1;
    }
    return b;
}

inline uint64_t fnv1a64(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline unsigned hardware_threads() {
    if (const char* env = std::getenv("SMF_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return static_cast<unsigned>(t);
    }
    unsigned t = std::thread::hardware_concurrency();
    return t ? t : 1;
}

// Runs fn(i) for i in [0, n). Tasks must write to disjoint state; with exact
// arithmetic the schedule never affects results.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    unsigned nt = hardware_threads();
    if (nt <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace smf
