#include "ecpe/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "ecpe/error.hpp"
#include "ecpe/kernels.hpp"

namespace ecpe {

ClauseVector vectorize_clause(const Clause& clause, const EmbeddingTable& raw, const EmbeddingTable& aware)
{
    if (raw.dim() != aware.dim()) throw DataError("vectorize_clause: raw and aware tables differ in dimension");
    const std::size_t d = raw.dim();
    std::vector<double> pooled(2 * d, -std::numeric_limits<double>::infinity());
    bool any = false;
    for (const auto& w : clause.words) {
        const auto r = raw.find(w);
        const auto a = aware.find(w);
        if (!r || !a) continue;
        any = true;
        for (std::size_t j = 0; j < d; ++j) {
            pooled[j] = std::max(pooled[j], (*r)[j]);
            pooled[d + j] = std::max(pooled[d + j], (*a)[j]);
        }
    }
    if (!any) throw DataError("clause '" + clause.text() + "' has no in-vocabulary tokens");
    if (std::all_of(pooled.begin(), pooled.end(), [](double v) { return v == 0.0; }))
        throw DataError("clause '" + clause.text() + "' pools to a zero vector");
    return {std::move(pooled), clause.review_id, clause.text()};
}

double cosine_distance(std::span<const double> a, std::span<const double> b)
{
    return 1.0 - cosine_similarity(a, b);
}

namespace {

std::vector<double> flatten(std::span<const std::vector<double>> vectors)
{
    std::vector<double> flat;
    if (vectors.empty()) return flat;
    const std::size_t d = vectors.front().size();
    flat.reserve(vectors.size() * d);
    for (const auto& v : vectors) {
        if (v.size() != d) throw DataError("clause vectors differ in length");
        if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
            throw DataError("zero clause vector");
        flat.insert(flat.end(), v.begin(), v.end());
    }
    return flat;
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::span<const std::vector<double>> vectors) : n_(vectors.size())
{
    if (n_ == 0) return;
    const auto flat = flatten(vectors);
    d_ = kernels::cosine_distance_matrix({flat, n_, vectors.front().size()});
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), d_(std::move(values))
{
    if (d_.size() != n * n) throw DataError("distance matrix shape mismatch");
}

std::vector<Members> agglomerative_complete_link(const DistanceMatrix& distances, double threshold)
{
    const std::size_t n = distances.size();
    // Active clusters are keyed by their smallest member; link(i, j) holds
    // the complete-linkage distance between active clusters i and j and is
    // maintained with the Lance-Williams update max(link(k,i), link(k,j)).
    std::vector<double> link(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) link[i * n + j] = distances(i, j);
    std::vector<Members> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};
    std::vector<bool> active(n, true);

    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = n, bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (link[i * n + j] < best) {
                    best = link[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == n || !(best < threshold)) break;

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double d = std::max(link[k * n + bi], link[k * n + bj]);
            link[k * n + bi] = d;
            link[bi * n + k] = d;
        }
        active[bj] = false;
        auto& dst = members[bi];
        dst.insert(dst.end(), members[bj].begin(), members[bj].end());
        std::sort(dst.begin(), dst.end());
        members[bj].clear();
    }

    std::vector<Members> out;
    for (std::size_t i = 0; i < n; ++i)
        if (active[i]) out.push_back(std::move(members[i]));
    return out;
}

std::vector<Members> agglomerative_complete_link(std::span<const std::vector<double>> vectors, double threshold)
{
    return agglomerative_complete_link(DistanceMatrix(vectors), threshold);
}

PruneResult prune_small(std::vector<Members> clusters, std::size_t min_size)
{
    PruneResult out;
    for (auto& c : clusters) {
        if (c.size() >= min_size)
            out.kept.push_back(std::move(c));
        else
            out.pruned.insert(out.pruned.end(), c.begin(), c.end());
    }
    std::sort(out.pruned.begin(), out.pruned.end());
    return out;
}

std::size_t head_clause(std::span<const std::size_t> members, const DistanceMatrix& distances)
{
    if (members.empty()) throw DataError("head_clause: empty cluster");
    std::size_t best = members.front();
    double best_obj = std::numeric_limits<double>::infinity();
    for (auto m : members) {
        double worst = 0.0;
        for (auto o : members)
            if (o != m) worst = std::max(worst, distances(m, o));
        if (worst < best_obj || (worst == best_obj && m < best)) {
            best_obj = worst;
            best = m;
        }
    }
    return best;
}

std::vector<ClusterSet> cluster_causes(std::span<const ClusterEntry> entries, double threshold)
{
    std::map<std::pair<std::string, std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < entries.size(); ++i)
        groups[{entries[i].product, index_of(entries[i].emotion)}].push_back(i);

    std::vector<ClusterSet> out;
    out.reserve(groups.size());
    for (const auto& [key, indices] : groups) {
        std::vector<std::vector<double>> vectors;
        vectors.reserve(indices.size());
        for (auto i : indices) vectors.push_back(entries[i].vector.values);
        const DistanceMatrix distances(vectors);
        auto pruned = prune_small(agglomerative_complete_link(distances, threshold));

        ClusterSet set{key.first, static_cast<Emotion>(key.second), threshold, {}, {}};
        for (const auto& local : pruned.kept) {
            Cluster c;
            for (auto m : local) c.members.push_back(indices[m]);
            c.head = indices[head_clause(local, distances)];
            set.clusters.push_back(std::move(c));
        }
        for (auto m : pruned.pruned) set.pruned.push_back(indices[m]);
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace ecpe
