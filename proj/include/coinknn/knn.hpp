#pragma once

/**
 * @file knn.hpp
 *
 * Exact k-nearest-neighbor retrieval by linear scan, independent of the comparator.
 * Ties in comparison value are broken by the smaller point index, so results are
 * deterministic for a given input order.
 */

#include "coinknn/densities.hpp"
#include "coinknn/similarity.hpp"

#include <span>
#include <vector>

namespace coinknn {

struct LabeledPoint {
    FeatureVector features;
    Group label = Group::A;
};

struct Neighbor {
    std::size_t index = 0;
    double value = 0.0;
    Group label = Group::A;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Ordered by (value, index); values non-decreasing.
using NeighborSet = std::vector<Neighbor>;

struct GroupCounts {
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    friend bool operator==(const GroupCounts&, const GroupCounts&) = default;
};

/// The k points with the smallest compare(kind, reference, point). Throws InvalidInput if k == 0 or k > points.size().
NeighborSet k_nearest(std::span<const double> reference, std::span<const LabeledPoint> points, std::size_t k,
                      const ComparatorKind& kind);

GroupCounts count_by_group(const NeighborSet& neighbors);

/// Majority label; an exact tie goes to the label of the nearest neighbor.
Group classify(std::span<const double> reference, std::span<const LabeledPoint> points, std::size_t k,
               const ComparatorKind& kind);

}  // namespace coinknn
