#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcnobs/bcn.hpp"

namespace bcnobs {

enum class PairKind : std::uint8_t { owpg, rwpg };
const char* to_string(PairKind kind);

inline constexpr unsigned kDefaultStateCap = 14;
inline constexpr unsigned kMaxStateCap = 20;
inline constexpr unsigned kMaxPairInputs = 20;

/// Direct cost 2^(2n+m-1) rendered as a decimal string.
std::string direct_cost_text(std::size_t n, std::size_t m);

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unordered state pair, stored with code(lo) <= code(hi).
struct PairVertex {
    StateVec lo, hi;

    bool diagonal() const noexcept { return lo == hi; }
    std::string str() const { return lo.str() + "," + hi.str(); }
    friend bool operator==(const PairVertex&, const PairVertex&) = default;
};

/// Weighted pair graph over equal-output state pairs.
///
/// Vertices are numbered bucket by bucket (buckets = output values in
/// increasing order, states inside a bucket in increasing code), and inside
/// a bucket by (hi, lo) position. Edges are kept in CSR form; the weight of
/// an edge is the sorted list of input codes that induce it.
class PairGraph {
public:
    PairKind kind() const noexcept { return kind_; }
    unsigned num_states() const noexcept { return n_; }
    unsigned num_inputs() const noexcept { return m_; }

    std::size_t num_vertices() const noexcept { return lo_.size(); }
    std::size_t num_edges() const noexcept { return dst_.size(); }

    PairVertex vertex(std::size_t v) const;
    std::uint64_t lo_code(std::size_t v) const noexcept { return lo_[v]; }
    std::uint64_t hi_code(std::size_t v) const noexcept { return hi_[v]; }
    bool is_diagonal(std::size_t v) const noexcept { return lo_[v] == hi_[v]; }

    /// Vertex index of the unordered pair {a, b}, if it is a member.
    std::optional<std::size_t> find(std::uint64_t a, std::uint64_t b) const;

    std::size_t edge_begin(std::size_t v) const noexcept { return row_[v]; }
    std::size_t edge_end(std::size_t v) const noexcept { return row_[v + 1]; }
    std::uint32_t edge_target(std::size_t e) const noexcept { return dst_[e]; }
    std::span<const std::uint32_t> edge_weight(std::size_t e) const noexcept {
        return {inputs_.data() + wrow_[e], inputs_.data() + wrow_[e + 1]};
    }

    friend PairGraph build_pair_graph(const Bcn& bcn, PairKind kind, unsigned cap);

private:
    PairKind kind_ = PairKind::owpg;
    unsigned n_ = 0, m_ = 0;
    std::vector<std::uint32_t> lo_, hi_;
    // Per-state lookup tables used by find().
    std::vector<std::uint64_t> out_of_state_;
    std::vector<std::uint32_t> pos_in_bucket_;
    std::vector<std::uint64_t> bucket_vertex_base_;
    std::vector<std::uint32_t> bucket_of_state_;
    std::vector<std::uint64_t> row_;
    std::vector<std::uint32_t> dst_;
    std::vector<std::uint64_t> wrow_;
    std::vector<std::uint32_t> inputs_;
};

PairGraph build_pair_graph(const Bcn& bcn, PairKind kind, unsigned cap = kDefaultStateCap);

/// Start pair, input prefix and repeated input cycle of an infinite
/// equal-output run.
struct LassoWitness {
    PairKind kind = PairKind::owpg;
    PairVertex start;
    std::vector<InputVec> prefix;
    std::vector<InputVec> cycle;

    /// `lo,hi : p1,p2 | c1,c2` with vectors in declaration bit order.
    std::string to_string() const;
    friend bool operator==(const LassoWitness&, const LassoWitness&) = default;
};

/// Parses the text produced by LassoWitness::to_string for the given BCN.
LassoWitness parse_witness(const std::string& text, const Bcn& bcn, PairKind kind = PairKind::owpg);

struct Verdict {
    PairKind kind = PairKind::owpg;
    bool positive = false;
    std::optional<LassoWitness> witness;
};

/// Strongly connected components with the cycle-reachability facts the
/// decision procedures need.
struct SccInfo {
    std::vector<std::uint32_t> comp;  // per vertex; ids in reverse topological order
    std::vector<bool> cyclic;         // per component: size >= 2 or self-loop
    std::vector<bool> reaches_cycle;  // per component
    std::vector<bool> reaches_diagonal;
};

SccInfo analyze_scc(const PairGraph& g);

Verdict is_observable(const PairGraph& owpg);
Verdict is_observable(const Bcn& bcn, unsigned cap = kDefaultStateCap);

/// A witness when some non-diagonal vertex reaches a diagonal one; nothing
/// otherwise (which decides nothing).
std::optional<LassoWitness> quick_unobservable_check(const PairGraph& owpg);
std::optional<LassoWitness> quick_unobservable_check(const Bcn& bcn, unsigned cap = kDefaultStateCap);

Verdict is_reconstructible(const PairGraph& rwpg);
Verdict is_reconstructible(const Bcn& bcn, unsigned cap = kDefaultStateCap);

/// Lasso starting at a given vertex, or nothing when no cycle is reachable.
/// With `via_diagonal`, the path first runs to the nearest diagonal vertex.
std::optional<LassoWitness> lasso_from(const PairGraph& g, std::size_t start, bool via_diagonal = false);

struct ReplayStep {
    StateVec x, x2;
    OutputVec y, y2;
};

struct ReplayTrace {
    std::vector<ReplayStep> steps;
    std::optional<std::size_t> output_divergence;  // first step with different outputs
    std::optional<std::size_t> states_merged;      // first step with equal states
};

/// Simulates both trajectories under prefix + `rounds` cycle repetitions.
ReplayTrace replay_witness(const Bcn& bcn, const LassoWitness& w, std::size_t rounds);

struct PairGraphStats {
    std::size_t diagonal = 0;
    std::size_t non_diagonal = 0;
    std::size_t edges = 0;
};

PairGraphStats pair_graph_stats(const PairGraph& g);

/// `idx: lo,hi [diag]` per vertex, then `src -> dst : {u,...}` per edge.
void dump_pair_graph(const PairGraph& g, std::ostream& os);

}  // namespace bcnobs
