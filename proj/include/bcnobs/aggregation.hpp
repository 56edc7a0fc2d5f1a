#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bcnobs/bcn.hpp"

namespace bcnobs {

class AggregationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Block {
    std::string name;
    std::vector<std::string> nodes;  // as listed by the user

    friend bool operator==(const Block&, const Block&) = default;
};

/// Partition of every node of a BCN into named, nonempty, disjoint blocks.
///
/// Observation outputs (see Bcn::with_observations) that no block lists are
/// appended to the block holding the state they observe.
class Aggregation {
public:
    Aggregation(Bcn bcn, std::vector<Block> blocks);

    const Bcn& bcn() const noexcept { return *bcn_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    const NetworkGraph& network() const noexcept { return *graph_; }

    std::size_t block_of(const std::string& node) const;
    std::size_t block_of_node(std::size_t graph_node) const { return owner_[graph_node]; }
    std::optional<std::size_t> find_block(const std::string& name) const;

    /// Members of block i by class, in parent declaration order.
    std::vector<std::string> states_of(std::size_t i) const;
    std::vector<std::string> inputs_of(std::size_t i) const;
    std::vector<std::string> outputs_of(std::size_t i) const;

    friend bool operator==(const Aggregation& a, const Aggregation& b);

private:
    std::vector<std::string> members_of(std::size_t i, NodeClass cls) const;

    std::shared_ptr<const Bcn> bcn_;
    std::shared_ptr<const NetworkGraph> graph_;
    std::vector<Block> blocks_;
    std::vector<std::size_t> owner_;  // graph node id -> block index
};

/// Same block layout over another BCN (typically one with extra observation outputs).
Aggregation rebind(const Aggregation& agg, Bcn bcn);

struct BlockReport {
    std::size_t block = 0;
    std::string name;
    bool has_output = false;          // item (a)
    bool outputs_local = true;        // every in-block output reads in-block states only
    bool states_reach_output = true;  // item (b)
    bool vacuous = false;             // no state nodes
    std::vector<std::string> nonlocal_outputs;
    std::vector<std::string> stranded_states;  // states failing item (b)
    std::vector<std::string> external_inputs;  // tails of entering edges, parent declaration order

    bool passed() const noexcept { return has_output && outputs_local && states_reach_output; }
};

struct ValidationReport {
    std::vector<BlockReport> blocks;

    bool passed() const noexcept;
    std::string to_text() const;
    /// One finding per line: `block=<name> check=<id> result=pass|fail detail="..."`.
    std::string to_kv() const;
};

ValidationReport validate_assumption1(const Aggregation& agg);

struct AggregationGraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
        std::vector<std::pair<std::string, std::string>> crossing;  // network edges, sorted by node id
    };
    std::vector<std::string> names;
    std::vector<Edge> edges;  // sorted by (from, to)

    std::size_t size() const noexcept { return names.size(); }
    std::vector<std::size_t> successors(std::size_t block) const;
    std::size_t indegree(std::size_t block) const;
};

AggregationGraph build_aggregation_graph(const Aggregation& agg);

bool is_acyclic(const AggregationGraph& ag);

class CycleError : public std::runtime_error {
public:
    CycleError(std::string what, std::vector<std::size_t> cycle)
        : std::runtime_error(std::move(what)), cycle_(std::move(cycle)) {}
    /// Block indices b0 -> b1 -> ... -> b0 (first block not repeated).
    const std::vector<std::size_t>& cycle() const noexcept { return cycle_; }

private:
    std::vector<std::size_t> cycle_;
};

/// One directed cycle of the aggregation graph, if any.
std::optional<std::vector<std::size_t>> find_cycle(const AggregationGraph& ag);

/// Repeated removal of a zero-indegree block, smallest index first.
std::vector<std::size_t> topological_order(const AggregationGraph& ag);

/// True iff some reordering makes every prefix union free of entering edges.
/// Grows the largest closed prefix directly on network-graph edges rather
/// than on the aggregation graph.
bool is_cascading(const Aggregation& agg);

struct SubBcn {
    std::size_t block = 0;
    std::string name;
    std::optional<Bcn> bcn;  // empty for a block without state nodes
    std::vector<std::string> external_inputs;

    bool vacuous() const noexcept { return !bcn.has_value(); }
};

/// Builds the sub-BCN of block i. Throws AggregationError when the block has
/// no output, has an output reading foreign states, or (when
/// `require_reachability`) has a state that reaches no admissible output.
SubBcn extract_sub_bcn(const Aggregation& agg, std::size_t i, bool require_reachability = true);

}  // namespace bcnobs
