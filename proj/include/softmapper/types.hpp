#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace softmapper {

// A set of n points in R^d, row-major, with optional per-point integer labels.
struct PointCloud {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> coords;  // n * d
    std::vector<int> labels;     // empty, or size n

    bool has_labels() const { return !labels.empty(); }

    const double* point(std::size_t i) const { return coords.data() + i * d; }

    double coord(std::size_t i, std::size_t j) const { return coords[i * d + j]; }

    void validate() const;
};

// One real filter value per point.
using FilterValues = std::vector<double>;

double euclidean_distance(const double* a, const double* b, std::size_t d);

}  // namespace softmapper
