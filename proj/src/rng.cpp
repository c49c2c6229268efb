#include "softmapper/rng.hpp"

#include <cmath>

namespace softmapper {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    // FNV-1a over the label bytes
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return derive_seed(seed, h);
}

std::size_t Rng::categorical(const double* probs, std::size_t k) {
    double u = uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    bool seen_positive = false;
    for (std::size_t j = 0; j < k; ++j) {
        if (probs[j] > 0.0) {
            last_positive = j;
            seen_positive = true;
        }
        acc += probs[j];
        if (u < acc) return j;
    }
    // u landed past the accumulated mass (rounding); take the last category
    // that had positive probability.
    return seen_positive ? last_positive : k - 1;
}

}  // namespace softmapper
