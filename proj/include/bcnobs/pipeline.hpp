#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcnobs/aggregation.hpp"
#include "bcnobs/bcn.hpp"
#include "bcnobs/pair_graph.hpp"

namespace bcnobs {

using BigInt = boost::multiprecision::cpp_int;

struct RunOptions {
    unsigned cap = kDefaultStateCap;
    unsigned workers = 0;  // 0: BCNOBS_WORKERS, else hardware concurrency
};

/// Worker count from BCNOBS_WORKERS, falling back to the hardware.
unsigned default_workers();

/// Dispatches to is_observable / is_reconstructible on the whole network.
Verdict verify_direct(const Bcn& bcn, Property property, unsigned cap = kDefaultStateCap);

enum class BlockStatus : std::uint8_t { positive, negative, vacuous, unverified, skipped };
const char* to_string(BlockStatus s);

struct BlockVerdict {
    std::size_t block = 0;
    std::string name;
    BlockStatus status = BlockStatus::skipped;
    std::size_t n = 0, m = 0, q = 0;
    std::optional<PairGraphStats> stats;
    std::optional<LassoWitness> witness;
    std::string detail;
};

enum class Overall : std::uint8_t { proved, inconclusive };
const char* to_string(Overall o);

struct DecomposedVerdict {
    Property property = Property::observability;
    Overall overall = Overall::inconclusive;
    bool acyclic = false;
    bool admissible = false;  // the block conditions this property relies on hold
    ValidationReport validation;
    std::optional<std::vector<std::size_t>> order;  // tau, when acyclic
    std::optional<std::vector<std::size_t>> cycle;  // when cyclic
    std::vector<BlockVerdict> blocks;
    std::vector<std::string> notes;

    bool proved() const noexcept { return overall == Overall::proved; }
};

/// PROVED when the aggregation is acyclic, its blocks are admissible and
/// every sub-BCN is positive; INCONCLUSIVE otherwise. Blocks whose sub-BCN
/// can be built are checked even when the result cannot be PROVED, for the
/// report. For reconstructibility the in-block reachability condition is
/// reported but not required.
DecomposedVerdict verify_decomposed(const Aggregation& agg, Property property, RunOptions options = {});

struct BlockCost {
    std::string name;
    std::size_t n = 0, m = 0;
    BigInt cost;
};

struct CostEstimate {
    std::size_t k = 0;
    std::size_t n = 0, m = 0;
    std::vector<BlockCost> blocks;
    BigInt direct;
    BigInt aggregated;
    long double idealized = 0;  // k * 2^((2n+m)/k - 1)
    bool aggregated_below_direct = false;
};

/// Cost of a network of size (n, m) verified directly, 2^(2n+m-1); zero
/// when there is nothing to build.
BigInt pair_graph_cost(std::size_t n, std::size_t m);

CostEstimate estimate_cost(const Aggregation& agg);
CostEstimate estimate_cost(std::size_t n, std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& blocks);

/// Adds one identity output `obs_<x>` per listed state node.
Bcn add_observations(const Bcn& bcn, const std::vector<std::string>& states);

enum class SearchMode : std::uint8_t { leave_one_out, exhaustive };
inline constexpr std::size_t kMaxExhaustivePool = 12;

struct ObservationSetReport {
    std::size_t block = 0;
    std::string name;
    Property property = Property::observability;
    SearchMode mode = SearchMode::leave_one_out;
    std::vector<std::string> candidates;
    bool full_set_passes = false;
    std::vector<std::string> necessary;
    std::vector<std::vector<std::string>> minimal_sets;  // exhaustive mode
    std::optional<bool> unique;                         // exhaustive mode
    std::size_t evaluated = 0;
};

/// Does observing exactly `observed` (on top of existing outputs) make the
/// sub-BCN of `block` positive?
bool block_passes(const Aggregation& agg, std::size_t block, Property property,
                  const std::vector<std::string>& observed, unsigned cap = kDefaultStateCap);

/// Candidate pool: the block's state nodes that are not observed yet.
ObservationSetReport analyze_observation_sets(const Aggregation& agg, std::size_t block, Property property,
                                              SearchMode mode, RunOptions options = {});

}  // namespace bcnobs
