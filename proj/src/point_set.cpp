#include "knnfe/point_set.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace knnfe {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw std::invalid_argument("PointSet: dimension must be >= 1");
    if (coords_.size() % dim_ != 0)
        throw std::invalid_argument("PointSet: coordinate count not a multiple of dim");
    for (double c : coords_)
        if (!std::isfinite(c)) throw std::invalid_argument("PointSet: non-finite coordinate");
}

void PointSet::push_back(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw std::invalid_argument("PointSet: row width mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
}

PointSet PointSet::zeros(std::size_t m, std::size_t dim) {
    return PointSet(dim, std::vector<double>(m * dim, 0.0));
}

PointSet load_points_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open point file: " + path);

    std::vector<double> coords;
    std::size_t dim = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t fields = 0;
        const char* p = line.data();
        const char* end = p + line.size();
        while (true) {
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{})
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": malformed numeric field");
            coords.push_back(v);
            ++fields;
            if (next == end) break;
            if (*next != ',')
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected ',' separator");
            p = next + 1;
        }
        if (dim == 0) dim = fields;
        else if (fields != dim)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": row width differs from first row");
    }
    if (coords.empty()) throw std::runtime_error(path + ": empty point file");
    return PointSet(dim, std::move(coords));
}

void save_points_csv(const PointSet& points, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write point file: " + path);
    char buf[64];
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", points(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace knnfe
