#pragma once

// Brute-force references for the clustering code: complete linkage
// recomputed from scratch every step and an exhaustive medoid scan.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ecpe/clustering.hpp"
#include "ecpe/nn.hpp"

namespace ecpe::testing {

inline std::vector<Members> naive_complete_link(const DistanceMatrix& d, double threshold)
{
    std::vector<Members> clusters;
    for (std::size_t i = 0; i < d.size(); ++i) clusters.push_back({i});
    for (;;) {
        std::sort(clusters.begin(), clusters.end());
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double link = 0.0;
                for (auto a : clusters[i])
                    for (auto b : clusters[j]) link = std::max(link, d(a, b));
                // Clusters are sorted by first member, so the first strict
                // improvement in (i, j) order is the lexicographic winner.
                if (link < best) {
                    best = link;
                    bi = i;
                    bj = j;
                }
            }
        if (!(best < threshold)) break;
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters.erase(clusters.begin() + static_cast<long>(bj));
    }
    std::sort(clusters.begin(), clusters.end());
    return clusters;
}

inline std::size_t naive_head(const std::vector<std::size_t>& members, const DistanceMatrix& d)
{
    std::size_t best = members.front();
    double best_radius = std::numeric_limits<double>::infinity();
    for (auto m : members) {
        double radius = 0.0;
        for (auto o : members)
            if (o != m) radius = std::max(radius, d(m, o));
        if (radius < best_radius || (radius == best_radius && m < best)) {
            best_radius = radius;
            best = m;
        }
    }
    return best;
}

// Vectors scattered around a few directions so that many pairwise
// distances fall near the merge threshold; some are exact duplicates.
inline std::vector<std::vector<double>> clustered_vectors(nn::Rng& rng, std::size_t n, std::size_t dim)
{
    std::vector<std::vector<double>> centres;
    const std::size_t k = 1 + rng.below(3);
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> v(dim);
        for (auto& x : v) x = rng.normal();
        centres.push_back(v);
    }
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.empty() && rng.uniform() < 0.1) {
            out.push_back(out[rng.below(out.size())]);
            continue;
        }
        auto v = centres[rng.below(k)];
        const double spread = rng.uniform(0.05, 0.6);
        for (auto& x : v) x += spread * rng.normal();
        out.push_back(v);
    }
    return out;
}

}  // namespace ecpe::testing
