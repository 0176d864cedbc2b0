#pragma once

// Reproducible random streams.
//
// Every stream is a std::mt19937_64 whose state is initialised through
// std::seed_seq from the 32-bit words of (master seed, stream index, purpose
// tag). Both the engine and seed_seq are specified bit-for-bit by the C++
// standard. Gaussian variates come from boost::random::normal_distribution,
// whose ziggurat algorithm is also platform independent (unlike
// std::normal_distribution).

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "pqchaos/core.hpp"

namespace pqchaos {

enum class StreamPurpose : std::uint32_t {
    Hamiltonian = 0,
    Kraus = 1,
    State = 2,
    Generic = 3,
};

class RandomStream {
public:
    using Engine = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0,
                          StreamPurpose purpose = StreamPurpose::Generic) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(purpose)};
        engine_.seed(seq);
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        boost::random::normal_distribution<double> dist(mean, stddev);
        return dist(engine_);
    }

    double uniform(double lo = 0.0, double hi = 1.0) {
        boost::random::uniform_real_distribution<double> dist(lo, hi);
        return dist(engine_);
    }

    /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    Complex complex_normal() {
        constexpr double s = 0.70710678118654752440;
        const double re = normal(0.0, s);
        const double im = normal(0.0, s);
        return {re, im};
    }

    Engine& engine() { return engine_; }

private:
    Engine engine_;
};

/// Seed of realization `index` in an ensemble driven by `master_seed`.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

}  // namespace pqchaos
