#include "softmapper/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "softmapper/rng.hpp"

namespace softmapper {

void PointCloud::validate() const {
    if (n < 1 || d < 1) throw std::invalid_argument("point cloud must have n >= 1 and d >= 1");
    if (coords.size() != n * d) throw std::invalid_argument("point cloud coordinate buffer size mismatch");
    for (double v : coords) {
        if (!std::isfinite(v)) throw std::invalid_argument("point cloud contains non-finite coordinate");
    }
    if (!labels.empty() && labels.size() != n) throw std::invalid_argument("label count does not match point count");
}

double euclidean_distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double diff = a[j] - b[j];
        s += diff * diff;
    }
    return std::sqrt(s);
}

void CircleSpec::validate() const {
    if (centers.empty() || centers.size() != radii.size())
        throw std::invalid_argument("circle spec needs equal nonzero counts of centers and radii");
    if (points_per_circle < 1) throw std::invalid_argument("points_per_circle must be positive");
    for (double r : radii) {
        if (!(r > 0.0)) throw std::invalid_argument("circle radius must be positive");
    }
    if (noise_sd < 0.0) throw std::invalid_argument("noise_sd must be nonnegative");
}

PointCloud generate_circles(const CircleSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t circles = spec.centers.size();
    PointCloud pc;
    pc.n = circles * spec.points_per_circle;
    pc.d = 2;
    pc.coords.resize(pc.n * 2);
    pc.labels.resize(pc.n);

    Rng rng(derive_seed(seed, "circles"));
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::size_t idx = 0;
    for (std::size_t c = 0; c < circles; ++c) {
        for (std::size_t p = 0; p < spec.points_per_circle; ++p, ++idx) {
            double theta = two_pi * rng.uniform();
            double x = spec.centers[c][0] + spec.radii[c] * std::cos(theta);
            double y = spec.centers[c][1] + spec.radii[c] * std::sin(theta);
            if (spec.noise_sd > 0.0) {
                x += spec.noise_sd * rng.gaussian();
                y += spec.noise_sd * rng.gaussian();
            }
            pc.coords[idx * 2] = x;
            pc.coords[idx * 2 + 1] = y;
            pc.labels[idx] = static_cast<int>(c);
        }
    }
    return pc;
}

PointCloud load_csv(const std::string& path, bool labeled, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    PointCloud pc;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_header && line_no == 1) continue;
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline

        std::vector<double> cells;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            }
            while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed]))) ++consumed;
            if (consumed != cell.size())
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
            cells.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }

        if (columns == 0) {
            columns = cells.size();
            if (labeled && columns < 2)
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": labeled file needs >= 2 columns");
        } else if (cells.size() != columns) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": ragged row (" +
                                     std::to_string(cells.size()) + " cells, expected " + std::to_string(columns) + ")");
        }

        std::size_t dims = labeled ? columns - 1 : columns;
        for (std::size_t j = 0; j < dims; ++j) pc.coords.push_back(cells[j]);
        if (labeled) {
            double lab = cells[columns - 1];
            if (lab != std::floor(lab))
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": label column must be integer");
            pc.labels.push_back(static_cast<int>(lab));
        }
        ++pc.n;
    }
    if (pc.n == 0) throw std::runtime_error(path + ":1: empty file");
    pc.d = labeled ? columns - 1 : columns;
    pc.validate();
    return pc;
}

void save_csv(const PointCloud& pc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[64];
    for (std::size_t i = 0; i < pc.n; ++i) {
        for (std::size_t j = 0; j < pc.d; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", pc.coord(i, j));
            out << (j ? "," : "") << buf;
        }
        if (pc.has_labels()) out << ',' << pc.labels[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

FilterValues filter_coordinate(const PointCloud& pc, std::size_t axis) {
    if (axis >= pc.d) throw std::out_of_range("filter axis out of range");
    FilterValues f(pc.n);
    for (std::size_t i = 0; i < pc.n; ++i) f[i] = pc.coord(i, axis);
    return f;
}

FilterValues filter_mean_distance(const PointCloud& pc) {
    pc.validate();
    FilterValues f(pc.n);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pc.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            s += euclidean_distance(pc.point(i), pc.point(j), pc.d);
        }
        f[i] = s / static_cast<double>(pc.n);
    }
    return f;
}

namespace ref {

FilterValues filter_mean_distance(const PointCloud& pc) {
    pc.validate();
    FilterValues f(pc.n);
    for (std::size_t i = 0; i < pc.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < pc.n; ++j) {
            s += euclidean_distance(pc.point(i), pc.point(j), pc.d);
        }
        f[i] = s / static_cast<double>(pc.n);
    }
    return f;
}

}  // namespace ref

}  // namespace softmapper
