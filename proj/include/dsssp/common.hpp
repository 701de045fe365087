#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsssp {

using i64 = std::int64_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Distance sentinel for "unreachable" in exact computations.
constexpr i64 INF_DIST = std::numeric_limits<i64>::max() / 4;

// Thrown on contract violations (bad parameters, double deletes, ...).
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// floor(log2(x)) for x >= 1.
inline int floor_log2(u64 x) {
    int r = 0;
    while (x >>= 1) ++r;
    return r;
}

// ceil(log2(x)) for x >= 1.
inline int ceil_log2(u64 x) {
    if (x <= 1) return 0;
    return floor_log2(x - 1) + 1;
}

// lg with real-valued result, used by the separator quality formulas.
inline double lg(double x) {
    return std::log2(x);
}

// Splittable seeded RNG stream. Every consumer receives its own child
// stream so that adding a consumer does not perturb the draws of others.
class Rng {
public:
    explicit Rng(u64 seed) : engine_(seed) {}

    // Derive an independent child stream deterministically.
    Rng split() {
        u64 s = engine_();
        return Rng(s ^ 0x9e3779b97f4a7c15ull);
    }

    // Uniform integer in [0, bound).
    u64 next_below(u64 bound) {
        std::uniform_int_distribution<u64> dist(0, bound - 1);
        return dist(engine_);
    }

    u64 next_u64() { return engine_(); }

    double next_unit() {
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        return dist(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace dsssp
