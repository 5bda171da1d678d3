#include "coinknn/knn.hpp"

#include "coinknn/errors.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace coinknn {

NeighborSet k_nearest(std::span<const double> reference, std::span<const LabeledPoint> points, std::size_t k,
                      const ComparatorKind& kind) {
    if (k == 0 || k > points.size()) {
        throw InvalidInput(fmt::format("k_nearest: k = {} must be in [1, {}]", k, points.size()));
    }
    validate(kind);

    NeighborSet all;
    all.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        all.push_back({i, compare(kind, reference, points[i].features), points[i].label});
    }
    const auto closer = [](const Neighbor& a, const Neighbor& b) {
        return a.value < b.value || (a.value == b.value && a.index < b.index);
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
    all.resize(k);
    return all;
}

GroupCounts count_by_group(const NeighborSet& neighbors) {
    GroupCounts counts;
    for (const auto& n : neighbors) {
        switch (n.label) {
            case Group::A: ++counts.n_a; break;
            case Group::B: ++counts.n_b; break;
            default: throw InvalidInput("count_by_group: unknown group label");
        }
    }
    return counts;
}

Group classify(std::span<const double> reference, std::span<const LabeledPoint> points, std::size_t k,
               const ComparatorKind& kind) {
    const NeighborSet neighbors = k_nearest(reference, points, k, kind);
    const GroupCounts counts = count_by_group(neighbors);
    if (counts.n_a == counts.n_b) {
        return neighbors.front().label;
    }
    return counts.n_a > counts.n_b ? Group::A : Group::B;
}

}  // namespace coinknn
