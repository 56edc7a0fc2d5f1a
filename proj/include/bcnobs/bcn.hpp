#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bcnobs/expr.hpp"

namespace bcnobs {

/// Fixed-width bit vector with the canonical integer encoding: the node at
/// list index i occupies bit i. The tag keeps state, input and output
/// vectors apart at compile time.
template <class Tag>
class BitVector {
public:
    BitVector() = default;
    BitVector(std::uint64_t code, unsigned width) : code_(code), width_(width) {
        if (width > 64) throw std::invalid_argument("bit vector wider than 64");
        if (width < 64 && (code >> width) != 0) throw std::invalid_argument("code has bits beyond width");
    }

    static BitVector from_bits(const std::vector<bool>& bits) {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) code |= std::uint64_t{1} << i;
        return BitVector(code, static_cast<unsigned>(bits.size()));
    }

    /// Parses a string written in declaration order ("01" = first node 0, second node 1).
    static BitVector from_string(const std::string& text) {
        std::vector<bool> bits;
        for (char c : text) {
            if (c != '0' && c != '1') throw std::invalid_argument("bad bit string '" + text + "'");
            bits.push_back(c == '1');
        }
        return from_bits(bits);
    }

    std::uint64_t code() const noexcept { return code_; }
    unsigned width() const noexcept { return width_; }
    bool bit(unsigned i) const noexcept { return (code_ >> i) & 1u; }

    std::vector<bool> bits() const {
        std::vector<bool> out(width_);
        for (unsigned i = 0; i < width_; ++i) out[i] = bit(i);
        return out;
    }

    /// Declaration-order string; "-" for zero width.
    std::string str() const {
        if (width_ == 0) return "-";
        std::string s(width_, '0');
        for (unsigned i = 0; i < width_; ++i)
            if (bit(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;
    friend auto operator<=>(const BitVector& a, const BitVector& b) {
        return std::pair(a.width_, a.code_) <=> std::pair(b.width_, b.code_);
    }

private:
    std::uint64_t code_ = 0;
    unsigned width_ = 0;
};

struct StateTag;
struct InputTag;
struct OutputTag;
using StateVec = BitVector<StateTag>;
using InputVec = BitVector<InputTag>;
using OutputVec = BitVector<OutputTag>;

enum class NodeClass : std::uint8_t { state, input, output };
const char* to_string(NodeClass cls);

enum class Property : std::uint8_t { observability, reconstructibility };
const char* to_string(Property p);

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Directed dependency graph over input, state and output nodes.
/// Node ids: states first, then inputs, then outputs, each in declaration order.
struct NetworkGraph {
    struct Node {
        std::string name;
        NodeClass cls;
    };
    std::vector<Node> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (tail, head), sorted

    std::size_t indegree(std::size_t node) const;
    std::size_t outdegree(std::size_t node) const;
    std::vector<std::size_t> parents(std::size_t node) const;
    std::vector<std::size_t> children(std::size_t node) const;
    std::optional<std::size_t> find(const std::string& name) const;
    std::set<std::pair<std::string, std::string>> named_edges() const;
};

struct BcnOptions {
    /// Accept a network with no outputs (a bare gene network waiting for
    /// observations). Verification still requires at least one output.
    bool allow_no_outputs = false;
};

/// Boolean control network: x(t+1) = f(x(t), u(t)), y(t) = h(x(t)).
///
/// Immutable after construction; the constructor validates names and
/// variable scopes and compiles every expression. Outputs created through
/// with_observations() remember the state they copy so aggregations can
/// place them next to it.
class Bcn {
public:
    using Options = BcnOptions;

    Bcn(std::vector<std::string> states, std::vector<std::string> inputs, std::vector<std::string> outputs,
        std::vector<Expr> updates, std::vector<Expr> output_exprs, Options options = {});

    std::size_t num_states() const noexcept { return states_.size(); }
    std::size_t num_inputs() const noexcept { return inputs_.size(); }
    std::size_t num_outputs() const noexcept { return outputs_.size(); }

    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::string>& inputs() const noexcept { return inputs_; }
    const std::vector<std::string>& outputs() const noexcept { return outputs_; }
    const std::vector<Expr>& updates() const noexcept { return updates_; }
    const std::vector<Expr>& output_exprs() const noexcept { return output_exprs_; }

    const Expr& update_of(const std::string& state) const;
    const Expr& output_of(const std::string& output) const;

    std::optional<NodeClass> classify(const std::string& name) const;
    std::optional<std::size_t> state_index(const std::string& name) const;
    std::optional<std::size_t> input_index(const std::string& name) const;
    std::optional<std::size_t> output_index(const std::string& name) const;

    /// State node observed by an output created through with_observations().
    std::optional<std::string> observed_state(const std::string& output) const;
    const std::vector<std::string>& observed_states() const noexcept { return observed_; }

    StateVec step(const StateVec& x, const InputVec& u) const;
    OutputVec observe(const StateVec& x) const;

    /// Unchecked fast paths on raw codes (bit i = declaration index i).
    std::uint64_t step_code(std::uint64_t x, std::uint64_t u) const noexcept;
    std::uint64_t observe_code(std::uint64_t x) const noexcept;

    /// Returns a copy with one fresh identity output `obs_<x>` per listed state.
    Bcn with_observations(const std::vector<std::string>& states) const;

    friend bool operator==(const Bcn& a, const Bcn& b);

private:
    std::vector<std::string> states_, inputs_, outputs_;
    std::vector<Expr> updates_, output_exprs_;
    std::vector<std::string> observed_;  // parallel to the generated outputs, in order
    std::map<std::string, std::string> observation_of_;
    std::map<std::string, std::pair<NodeClass, std::size_t>> index_;
    std::vector<CompiledExpr> compiled_updates_, compiled_outputs_;
    Options options_;
};

/// Prefix used for generated observation outputs.
inline constexpr const char* kObservationPrefix = "obs_";

StateVec make_state(const Bcn& bcn, std::uint64_t code);
InputVec make_input(const Bcn& bcn, std::uint64_t code);

/// Edge (v, x) iff v occurs in the update of x; edge (x, y) iff x occurs in the output of y.
NetworkGraph derive_network_graph(const Bcn& bcn);

/// Syntactic edges whose tail does not semantically influence the head.
std::vector<std::pair<std::string, std::string>> vacuous_edges(const Bcn& bcn);

}  // namespace bcnobs
