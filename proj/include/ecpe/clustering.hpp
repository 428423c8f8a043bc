#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ecpe/clauses.hpp"
#include "ecpe/embeddings.hpp"
#include "ecpe/emotion.hpp"

namespace ecpe {

inline constexpr double kMergeThreshold = 0.13;
inline constexpr std::size_t kMinClusterSize = 2;

struct ClauseVector {
    std::vector<double> values;  // raw max-pool followed by emotion-aware max-pool
    std::string review_id;
    std::string text;
};

// Max-pools concat(raw(w), aware(w)) over the clause's in-vocabulary words.
// Throws DataError if no word is known to both tables or dims differ.
ClauseVector vectorize_clause(const Clause& clause, const EmbeddingTable& raw, const EmbeddingTable& aware);

// 1 - cosine similarity, in [0, 2].
double cosine_distance(std::span<const double> a, std::span<const double> b);

// Symmetric pairwise cosine-distance matrix over the vectors.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::span<const std::vector<double>> vectors);
    DistanceMatrix(std::size_t n, std::vector<double> values);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

using Members = std::vector<std::size_t>;

// Complete-linkage agglomeration: repeatedly merge the two clusters whose
// largest pairwise member distance is smallest, while it is < threshold.
// Equal distances resolve to the lexicographically smallest pair of
// clusters, a cluster being identified by its smallest member. Returns
// sorted member lists ordered by first member; every index appears once.
std::vector<Members> agglomerative_complete_link(const DistanceMatrix& distances, double threshold = kMergeThreshold);
std::vector<Members> agglomerative_complete_link(std::span<const std::vector<double>> vectors,
                                                 double threshold = kMergeThreshold);

struct PruneResult {
    std::vector<Members> kept;
    std::vector<std::size_t> pruned;  // sorted
};

PruneResult prune_small(std::vector<Members> clusters, std::size_t min_size = kMinClusterSize);

// Member minimising its largest distance to the other members; ties go to
// the smallest index. Members must be nonempty.
std::size_t head_clause(std::span<const std::size_t> members, const DistanceMatrix& distances);

struct ClusterEntry {
    std::string product;
    Emotion emotion;
    ClauseVector vector;
};

struct Cluster {
    Members members;   // indices into the entries passed to cluster_causes
    std::size_t head;  // one of members
};

struct ClusterSet {
    std::string product;
    Emotion emotion;
    double threshold = kMergeThreshold;
    std::vector<Cluster> clusters;
    std::vector<std::size_t> pruned;  // entry indices
};

// Groups by (product, emotion) and clusters each group independently.
// Output is ordered by product, then emotion label order.
std::vector<ClusterSet> cluster_causes(std::span<const ClusterEntry> entries, double threshold = kMergeThreshold);

}  // namespace ecpe
