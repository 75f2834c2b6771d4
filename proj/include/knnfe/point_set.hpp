#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace knnfe {

/// Dense row-major collection of m points in R^d.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::size_t dim, std::vector<double> coords);

    std::size_t size() const { return coords_.empty() ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> row(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    double operator()(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return coords_[i * dim_ + j]; }

    const std::vector<double>& coords() const { return coords_; }

    /// Appends one point; length must equal dim().
    void push_back(std::span<const double> p);

    static PointSet zeros(std::size_t m, std::size_t dim);

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Reads a headerless CSV point file: one row per point, '.' decimal
/// separator, LF line endings. Throws std::runtime_error on malformed
/// input or inconsistent row widths.
PointSet load_points_csv(const std::string& path);

/// Writes points in the same CSV dialect, with enough digits for exact
/// double round-trip.
void save_points_csv(const PointSet& points, const std::string& path);

} // namespace knnfe
