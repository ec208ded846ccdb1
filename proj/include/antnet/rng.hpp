#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace antnet {

// Deterministic random stream. All draws go through next_double() so a run
// is reproducible from the seed alone, independent of the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double next_double() {
        return (engine_() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n)
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_double() * static_cast<double>(n));
    }

    // exponential with the given rate (events per unit time)
    double next_exponential(double rate) {
        return -std::log(1.0 - next_double()) / rate;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace antnet
