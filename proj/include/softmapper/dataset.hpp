#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "softmapper/types.hpp"

namespace softmapper {

// Circles in the plane to sample from: one entry per circle.
struct CircleSpec {
    std::vector<std::array<double, 2>> centers;
    std::vector<double> radii;
    std::size_t points_per_circle = 0;
    double noise_sd = 0.0;

    void validate() const;
};

// Uniform angles on each circle, optional isotropic Gaussian noise added per
// coordinate. Labels record the circle index. Deterministic per seed.
PointCloud generate_circles(const CircleSpec& spec, std::uint64_t seed);

// One point per row, comma-separated reals, optional trailing integer label
// column, optional header row to skip.
PointCloud load_csv(const std::string& path, bool labeled = false, bool skip_header = false);
void save_csv(const PointCloud& pc, const std::string& path);

FilterValues filter_coordinate(const PointCloud& pc, std::size_t axis);

// f(x_i) = mean_j ||x_i - x_j||, self term included (contributes 0).
FilterValues filter_mean_distance(const PointCloud& pc);

namespace ref {
// Serial reference for the OpenMP kernel above; kept for tests and benchmarks.
FilterValues filter_mean_distance(const PointCloud& pc);
}  // namespace ref

}  // namespace softmapper
