#pragma once

#include <cstdint>
#include <vector>

#include "softmapper/gmm.hpp"

namespace softmapper {

// Hidden assignment matrix: each row sums to the event count 2, entries in
// {0,1,2}. H_ij >= 1 means point i occupies group j, so every point occupies
// one or two groups.
struct AssignmentMatrix {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<int> data;  // n * k

    int at(std::size_t i, std::size_t j) const { return data[i * k + j]; }
    int& at(std::size_t i, std::size_t j) { return data[i * k + j]; }
    void validate() const;

    bool operator==(const AssignmentMatrix&) const = default;
};

// Row i drawn from Multinomial(2, Q_i.) on a per-row RNG stream derived from
// (seed, i); the result is schedule-independent.
AssignmentMatrix sample_assignment(const ProbabilityMatrix& q, std::uint64_t seed);

// Row-wise multinomial mode: with q* and q** the largest and second largest
// entries, put 2 on q*'s index when q*/2 > q**, otherwise 1 on both indices.
// Ties broken by lowest column index; the comparison uses a 1e-12 relative
// tolerance before tie rules apply.
AssignmentMatrix mode_assignment(const ProbabilityMatrix& q);

// { j : H_ij >= 1 }, sorted ascending.
std::vector<std::size_t> assigned_groups(const AssignmentMatrix& h, std::size_t i);

// CSV of integers, one row per point.
void save_assignment_csv(const AssignmentMatrix& h, const std::string& path);

}  // namespace softmapper
