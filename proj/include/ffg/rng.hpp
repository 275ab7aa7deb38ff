#pragma once

#include <cstdint>
#include <random>

namespace ffg {

inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64/v1";

std::uint64_t splitmix64(std::uint64_t x);

// Seedable, splittable stream. Each (seed, stream) pair yields an
// independent std::mt19937_64 whose output is fixed by the standard, and the
// floating-point transforms below are written out so results do not depend
// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    // Independent child stream; does not advance this generator.
    Rng split(std::uint64_t stream) const;

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform();

    // Exponential with the given rate, by inversion.
    double exponential(double rate);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace ffg
