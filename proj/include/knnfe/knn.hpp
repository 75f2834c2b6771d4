#pragma once

#include "knnfe/point_set.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace knnfe {

/// Volume of the d-dimensional Euclidean unit ball,
/// V_d = 2^d Gamma(3/2)^d / Gamma(1 + d/2), evaluated through log-gamma.
double unit_ball_volume(std::size_t d);

struct Neighbor {
    double dist;       // Euclidean distance
    std::size_t index; // index into the indexed point set
};

/// Exact k-nearest-neighbor index: axis-aligned splitting tree with a
/// brute-force scan below the leaf-size threshold. Queries return the
/// same distances as a full brute-force scan; distance ties are ordered
/// by ascending point index. Immutable after construction and safe for
/// concurrent read-only queries.
class KnnIndex {
public:
    explicit KnnIndex(const PointSet& points, std::size_t leaf_size = 32);

    const PointSet& points() const { return *points_; }

    /// k nearest neighbors of `query`, sorted ascending by (distance, index).
    /// `exclude` removes one point identity from the candidate set.
    std::vector<Neighbor> knn(std::span<const double> query, std::size_t k,
                              std::optional<std::size_t> exclude = std::nullopt) const;

    /// Distance to the k-th nearest neighbor.
    double knn_distance(std::span<const double> query, std::size_t k,
                        std::optional<std::size_t> exclude = std::nullopt) const;

private:
    struct Node {
        // leaf: child_left < 0, [begin,end) indexes into perm_
        // internal: split on split_dim at split_val
        std::int32_t child_left = -1;
        std::int32_t child_right = -1;
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::uint32_t split_dim = 0;
        double split_val = 0.0;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, std::span<const double> query, std::size_t k,
                std::optional<std::size_t> exclude, std::vector<Neighbor>& heap) const;

    const PointSet* points_;
    std::size_t leaf_size_;
    std::vector<std::uint32_t> perm_;
    std::vector<Node> nodes_;
};

/// Brute-force k-NN distance with the same tie rule as KnnIndex; the
/// reference path for the index-equivalence checks.
double knn_distance_brute(const PointSet& points, std::span<const double> query,
                          std::size_t k,
                          std::optional<std::size_t> exclude = std::nullopt);

/// Normalized self k-NN ball volumes U_m^(k)(X_i): each point queries the
/// remaining m-1 sample points, so U_i = (m-1) * V_d * r_k(X_i)^d.
/// Requires m > k.
std::vector<double> self_knn_volumes(const PointSet& sample, std::size_t k);
std::vector<double> self_knn_volumes(const KnnIndex& index, std::size_t k);

/// Normalized cross k-NN ball volumes V_n^(l)(X_i) against an independent
/// sample Y: no exclusion, V_i = n * V_d * r_l(X_i|Y)^d. Requires n >= l
/// and matching dimensions.
std::vector<double> cross_knn_volumes(const PointSet& sample_x, const PointSet& sample_y,
                                      std::size_t l);
std::vector<double> cross_knn_volumes(const PointSet& sample_x, const KnnIndex& index_y,
                                      std::size_t l);

} // namespace knnfe
