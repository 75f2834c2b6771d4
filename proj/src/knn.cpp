#include "knnfe/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace knnfe {

double unit_ball_volume(std::size_t d) {
    if (d == 0) throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
    const double dd = static_cast<double>(d);
    return std::exp(dd * std::log(2.0) + dd * std::lgamma(1.5) - std::lgamma(1.0 + 0.5 * dd));
}

namespace {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

// Max-heap order on (squared distance, index): the heap top is the
// current worst candidate.
struct WorseFirst {
    bool operator()(const Neighbor& a, const Neighbor& b) const {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.index < b.index;
    }
};

inline void offer(std::vector<Neighbor>& heap, std::size_t k, double d2, std::size_t idx) {
    if (heap.size() < k) {
        heap.push_back({d2, idx});
        std::push_heap(heap.begin(), heap.end(), WorseFirst{});
        return;
    }
    const Neighbor cand{d2, idx};
    if (WorseFirst{}(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), WorseFirst{});
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), WorseFirst{});
    }
}

} // namespace

KnnIndex::KnnIndex(const PointSet& points, std::size_t leaf_size)
    : points_(&points), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    if (points.size() == 0) throw std::invalid_argument("KnnIndex: empty point set");
    perm_.resize(points.size());
    for (std::uint32_t i = 0; i < perm_.size(); ++i) perm_[i] = i;
    nodes_.reserve(2 * points.size() / leaf_size_ + 4);
    build(0, static_cast<std::uint32_t>(perm_.size()));
}

std::int32_t KnnIndex::build(std::uint32_t begin, std::uint32_t end) {
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    if (end - begin <= leaf_size_) return id;

    // Split the dimension of largest extent at the median coordinate.
    const PointSet& pts = *points_;
    const std::size_t d = pts.dim();
    std::size_t split_dim = 0;
    double best_extent = -1.0;
    for (std::size_t j = 0; j < d; ++j) {
        double lo = pts(perm_[begin], j), hi = lo;
        for (std::uint32_t i = begin + 1; i < end; ++i) {
            const double c = pts(perm_[i], j);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        if (hi - lo > best_extent) {
            best_extent = hi - lo;
            split_dim = j;
        }
    }
    if (best_extent <= 0.0) return id; // all points identical: keep as leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return pts(a, split_dim) < pts(b, split_dim);
                     });
    const double split_val = pts(perm_[mid], split_dim);

    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[id].child_left = left;
    nodes_[id].child_right = right;
    nodes_[id].split_dim = static_cast<std::uint32_t>(split_dim);
    nodes_[id].split_val = split_val;
    return id;
}

void KnnIndex::search(std::int32_t node, std::span<const double> query, std::size_t k,
                      std::optional<std::size_t> exclude, std::vector<Neighbor>& heap) const {
    const Node& n = nodes_[node];
    if (n.child_left < 0) {
        const PointSet& pts = *points_;
        for (std::uint32_t i = n.begin; i < n.end; ++i) {
            const std::size_t idx = perm_[i];
            if (exclude && idx == *exclude) continue;
            offer(heap, k, sq_dist(query, pts.row(idx)), idx);
        }
        return;
    }
    const double diff = query[n.split_dim] - n.split_val;
    const std::int32_t near = diff <= 0.0 ? n.child_left : n.child_right;
    const std::int32_t far = diff <= 0.0 ? n.child_right : n.child_left;
    search(near, query, k, exclude, heap);
    // Visit the far side on exact plane-distance ties as well, so equal
    // distances resolve by point index.
    if (heap.size() < k || diff * diff <= heap.front().dist)
        search(far, query, k, exclude, heap);
}

std::vector<Neighbor> KnnIndex::knn(std::span<const double> query, std::size_t k,
                                    std::optional<std::size_t> exclude) const {
    if (k == 0) throw std::invalid_argument("knn: k must be >= 1");
    if (query.size() != points_->dim())
        throw std::invalid_argument("knn: query dimension mismatch");
    const std::size_t candidates =
        points_->size() - ((exclude && *exclude < points_->size()) ? 1 : 0);
    if (candidates < k)
        throw std::invalid_argument("knn: insufficient points (need at least k candidates)");

    std::vector<Neighbor> heap;
    heap.reserve(k + 1);
    search(0, query, k, exclude, heap);
    std::sort_heap(heap.begin(), heap.end(), WorseFirst{});
    for (auto& nb : heap) nb.dist = std::sqrt(nb.dist);
    return heap;
}

double KnnIndex::knn_distance(std::span<const double> query, std::size_t k,
                              std::optional<std::size_t> exclude) const {
    return knn(query, k, exclude).back().dist;
}

double knn_distance_brute(const PointSet& points, std::span<const double> query,
                          std::size_t k, std::optional<std::size_t> exclude) {
    if (k == 0) throw std::invalid_argument("knn_distance_brute: k must be >= 1");
    if (query.size() != points.dim())
        throw std::invalid_argument("knn_distance_brute: query dimension mismatch");
    std::vector<Neighbor> all;
    all.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (exclude && i == *exclude) continue;
        all.push_back({sq_dist(query, points.row(i)), i});
    }
    if (all.size() < k)
        throw std::invalid_argument("knn_distance_brute: insufficient points");
    std::nth_element(all.begin(), all.begin() + (k - 1), all.end(), WorseFirst{});
    return std::sqrt(all[k - 1].dist);
}

namespace {

std::vector<double> volumes_from_distances(const std::vector<double>& r, double multiplier,
                                           std::size_t d) {
    const double vd = unit_ball_volume(d);
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        out[i] = multiplier * vd * std::pow(r[i], static_cast<double>(d));
    return out;
}

} // namespace

std::vector<double> self_knn_volumes(const KnnIndex& index, std::size_t k) {
    const PointSet& pts = index.points();
    const std::size_t m = pts.size();
    if (m <= k)
        throw std::invalid_argument("self_knn_volumes: need m > k");
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = index.knn_distance(pts.row(i), k, i);
    return volumes_from_distances(r, static_cast<double>(m - 1), pts.dim());
}

std::vector<double> self_knn_volumes(const PointSet& sample, std::size_t k) {
    KnnIndex index(sample);
    return self_knn_volumes(index, k);
}

std::vector<double> cross_knn_volumes(const PointSet& sample_x, const KnnIndex& index_y,
                                      std::size_t l) {
    const PointSet& y = index_y.points();
    if (sample_x.dim() != y.dim())
        throw std::invalid_argument("cross_knn_volumes: dimension mismatch");
    if (y.size() < l)
        throw std::invalid_argument("cross_knn_volumes: need n >= l");
    std::vector<double> r(sample_x.size());
    for (std::size_t i = 0; i < sample_x.size(); ++i)
        r[i] = index_y.knn_distance(sample_x.row(i), l);
    return volumes_from_distances(r, static_cast<double>(y.size()), sample_x.dim());
}

std::vector<double> cross_knn_volumes(const PointSet& sample_x, const PointSet& sample_y,
                                      std::size_t l) {
    KnnIndex index(sample_y);
    return cross_knn_volumes(sample_x, index, l);
}

} // namespace knnfe
