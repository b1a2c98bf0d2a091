#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cuckoo/orientation.hpp"
#include "cuckoo/rng.hpp"

// k-ary cuckoo hash table over n single-item slots. Each item's k distinct
// candidate slots come from a per-item PRNG stream, emulating fully random
// location sets. Online insertion is the random-walk variant: when all k
// slots are taken, the victim is uniform over all k locations (including the
// slot the incoming item just vacated conceptually), and the displaced item
// re-inserts recursively; after max_steps displacements the currently
// displaced item is dropped and reported, with no rollback of earlier moves.
// Offline construction places a whole item set at once via maximum bipartite
// matching and succeeds exactly when the induced hypergraph is orientable.

namespace cuckoo {

struct OfflineBuild;

class CuckooTable {
public:
    struct Stats {
        std::uint64_t inserts = 0;    // successful, non-duplicate inserts
        std::uint64_t evictions = 0;  // total displacements over all walks
        std::uint64_t failures = 0;   // walks that ran out of steps
    };

    struct InsertOutcome {
        bool success = false;
        std::uint32_t displacements = 0;
        std::optional<std::uint64_t> dropped_item;  // set on steps_exhausted
    };

    /// max_steps = 0 selects the default budget ceil(100 ln(n + 1)), generous
    /// enough that exhaustion signals genuine over-threshold load rather than
    /// an unlucky walk.
    CuckooTable(std::uint32_t capacity, int k, std::uint64_t seed,
                std::uint32_t max_steps = 0)
        : capacity_(capacity),
          k_(k),
          seed_(seed),
          max_steps_(max_steps != 0
                         ? max_steps
                         : static_cast<std::uint32_t>(
                               std::ceil(100.0 * std::log(static_cast<double>(capacity) + 1.0)))),
          slots_(capacity),
          walk_rng_(derive_seed(seed, 0x77616c6bULL)) {
        if (k < 2) throw std::invalid_argument("CuckooTable: requires k >= 2");
        if (capacity < static_cast<std::uint32_t>(k))
            throw std::invalid_argument("CuckooTable: capacity must be >= k");
    }

    std::uint32_t capacity() const noexcept { return capacity_; }
    int choices() const noexcept { return k_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint32_t max_steps() const noexcept { return max_steps_; }
    const Stats& stats() const noexcept { return stats_; }
    const std::vector<std::optional<std::uint64_t>>& slots() const noexcept { return slots_; }

    /// The k distinct candidate slots of an item: a pure function of
    /// (table seed, item), rejection-sampled from the item's own stream.
    std::vector<std::uint32_t> locations(std::uint64_t item) const {
        Xoshiro256ss stream(derive_seed(seed_, item));
        std::vector<std::uint32_t> out;
        out.reserve(k_);
        while (out.size() < static_cast<std::size_t>(k_)) {
            const auto slot = static_cast<std::uint32_t>(stream.below(capacity_));
            if (std::find(out.begin(), out.end(), slot) == out.end()) out.push_back(slot);
        }
        return out;
    }

    bool lookup(std::uint64_t item) const {
        for (const std::uint32_t slot : locations(item))
            if (slots_[slot] && *slots_[slot] == item) return true;
        return false;
    }

    InsertOutcome insert(std::uint64_t item) {
        if (lookup(item)) return InsertOutcome{true, 0, std::nullopt};
        std::uint64_t carried = item;
        std::uint32_t displacements = 0;
        for (;;) {
            const auto locs = locations(carried);
            std::uint32_t best = capacity_;
            for (const std::uint32_t slot : locs)
                if (!slots_[slot] && slot < best) best = slot;
            if (best < capacity_) {
                slots_[best] = carried;
                ++stats_.inserts;
                return InsertOutcome{true, displacements, std::nullopt};
            }
            if (displacements >= max_steps_) {
                ++stats_.failures;
                return InsertOutcome{false, displacements, carried};
            }
            const std::uint32_t victim = locs[walk_rng_.below(k_)];
            const std::uint64_t evicted = *slots_[victim];
            slots_[victim] = carried;
            carried = evicted;
            ++displacements;
            ++stats_.evictions;
        }
    }

    double load_factor() const noexcept {
        std::size_t occupied = 0;
        for (const auto& slot : slots_)
            if (slot) ++occupied;
        return capacity_ == 0 ? 0.0 : static_cast<double>(occupied) / capacity_;
    }

    /// Hypergraph of the items' location sets: vertex = slot, edge = item.
    Hypergraph location_hypergraph(std::span<const std::uint64_t> items) const {
        Hypergraph graph(capacity_, k_);
        std::vector<VertexId> edge;
        for (const std::uint64_t item : items) {
            const auto locs = locations(item);
            edge.assign(locs.begin(), locs.end());
            graph.add_edge(edge);
        }
        return graph;
    }

private:
    friend OfflineBuild build_offline(std::uint32_t, int, std::uint64_t,
                                      std::span<const std::uint64_t>);

    std::uint32_t capacity_;
    int k_;
    std::uint64_t seed_;
    std::uint32_t max_steps_;
    std::vector<std::optional<std::uint64_t>> slots_;
    Stats stats_;
    Xoshiro256ss walk_rng_;
};

struct OfflineBuild {
    CuckooTable table;
    bool success = false;
    std::size_t placed = 0;
};

/// Static allocation: computes a maximum matching between items and slots and
/// fills the table from it. Succeeds iff every item is matched, i.e. iff the
/// location hypergraph is orientable; on failure the matched subset is placed
/// and the rest reported unplaced.
inline OfflineBuild build_offline(std::uint32_t capacity, int k, std::uint64_t seed,
                                  std::span<const std::uint64_t> items) {
    OfflineBuild result{CuckooTable(capacity, k, seed), false, 0};
    const Hypergraph graph = result.table.location_hypergraph(items);
    const MatchingResult matching = max_matching(graph);
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::int64_t slot = matching.assignment.edge_to_vertex[i];
        if (slot == Assignment::kUnassigned) continue;
        result.table.slots_[static_cast<std::size_t>(slot)] = items[i];
        ++result.table.stats_.inserts;
    }
    result.placed = matching.size;
    result.success = matching.size == items.size();
    return result;
}

} // namespace cuckoo
