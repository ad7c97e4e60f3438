#pragma once

#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (seed, component, step, lane), so environments replay identically for a
// given seed and action sequence regardless of call order.
namespace confsel::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
    return mix(mix(a, b), c);
}

// 53 random mantissa bits mapped to [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Component identifiers for substream derivation.
enum class Component : std::uint64_t {
    ArmReward = 1,
    ArmCost = 2,
    IntervalPoint = 3,
    ScoreContext = 4,
    Demand = 5,
    OrOutcome = 6,
    OrInstance = 7,
    Replica = 8,
};

class Stream {
public:
    Stream(std::uint64_t seed, Component component) noexcept
        : key_(mix(seed, static_cast<std::uint64_t>(component))) {}

    std::uint64_t bits(std::uint64_t step, std::uint64_t lane = 0) const noexcept {
        return mix(key_, step, lane);
    }

    double uniform(std::uint64_t step, std::uint64_t lane = 0) const noexcept {
        return to_unit(bits(step, lane));
    }

private:
    std::uint64_t key_;
};

inline std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t replica) noexcept {
    return mix(master_seed, static_cast<std::uint64_t>(Component::Replica), replica);
}

}  // namespace confsel::rng
