#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace softmapper {

// Deterministic seed derivation. One top-level seed feeds every module
// through labeled sub-streams, so e.g. changing the sample count never
// perturbs dataset generation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

// mt19937_64 wrapper with hand-rolled distributions. std::*_distribution
// output is implementation-defined; these are not, so identical seeds give
// identical draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // standard normal, Box-Muller
    double gaussian() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // index draw from an unnormalized-tolerant probability row
    std::size_t categorical(const double* probs, std::size_t k);

private:
    std::mt19937_64 gen_;
};

}  // namespace softmapper
