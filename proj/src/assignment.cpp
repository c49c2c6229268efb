#include "softmapper/assignment.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "softmapper/rng.hpp"

namespace softmapper {

void AssignmentMatrix::validate() const {
    if (data.size() != n * k) throw std::invalid_argument("assignment matrix buffer size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        int sum = 0;
        for (std::size_t j = 0; j < k; ++j) {
            int v = at(i, j);
            if (v < 0 || v > 2)
                throw std::invalid_argument("assignment entry outside {0,1,2} at row " + std::to_string(i));
            sum += v;
        }
        if (sum != 2) throw std::invalid_argument("assignment row " + std::to_string(i) + " does not sum to 2");
    }
}

namespace {

void check_row(const ProbabilityMatrix& q, std::size_t i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < q.k; ++j) {
        double v = q.at(i, j);
        if (!(v >= 0.0) || v > 1.0 + 1e-12)
            throw std::invalid_argument("probability row " + std::to_string(i) + " has entry outside [0,1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("probability row " + std::to_string(i) + " does not sum to 1");
}

}  // namespace

AssignmentMatrix sample_assignment(const ProbabilityMatrix& q, std::uint64_t seed) {
    AssignmentMatrix h;
    h.n = q.n;
    h.k = q.k;
    h.data.assign(q.n * q.k, 0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q.n);

    for (std::size_t i = 0; i < q.n; ++i) check_row(q, i);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const double* row = q.row(static_cast<std::size_t>(i));
        // Multinomial(2, row) as two independent category draws.
        std::size_t a = rng.categorical(row, q.k);
        std::size_t b = rng.categorical(row, q.k);
        h.at(static_cast<std::size_t>(i), a) += 1;
        h.at(static_cast<std::size_t>(i), b) += 1;
    }
    return h;
}

AssignmentMatrix mode_assignment(const ProbabilityMatrix& q) {
    AssignmentMatrix h;
    h.n = q.n;
    h.k = q.k;
    h.data.assign(q.n * q.k, 0);

    for (std::size_t i = 0; i < q.n; ++i) check_row(q, i);

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* row = q.row(i);
        if (q.k == 1) {
            h.at(i, 0) = 2;
            continue;
        }
        std::size_t best = 0;
        for (std::size_t j = 1; j < q.k; ++j) {
            if (row[j] > row[best]) best = j;
        }
        std::size_t second = best == 0 ? 1 : 0;
        for (std::size_t j = 0; j < q.k; ++j) {
            if (j == best) continue;
            if (row[j] > row[second]) second = j;
        }
        double half_top = 0.5 * row[best];
        double tol = 1e-12 * std::max(half_top, row[second]);
        if (half_top > row[second] + tol) {
            h.at(i, best) = 2;
        } else {
            h.at(i, best) = 1;
            h.at(i, second) = 1;
        }
    }
    return h;
}

std::vector<std::size_t> assigned_groups(const AssignmentMatrix& h, std::size_t i) {
    if (i >= h.n) throw std::out_of_range("assignment row index out of range");
    std::vector<std::size_t> groups;
    for (std::size_t j = 0; j < h.k; ++j) {
        if (h.at(i, j) >= 1) groups.push_back(j);
    }
    return groups;
}

void save_assignment_csv(const AssignmentMatrix& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < h.n; ++i) {
        for (std::size_t j = 0; j < h.k; ++j) {
            out << (j ? "," : "") << h.at(i, j);
        }
        out << '\n';
    }
}

}  // namespace softmapper
