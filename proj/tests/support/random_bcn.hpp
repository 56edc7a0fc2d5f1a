#pragma once

// Hand-rolled generators for property tests. Every generator takes the
// caller's engine so a fixed seed reproduces a whole run.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "bcnobs/aggregation.hpp"
#include "bcnobs/bcn.hpp"

namespace bcnobs::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline const std::string& pick(Rng& rng, const std::vector<std::string>& xs) { return xs[uniform(rng, 0, xs.size() - 1)]; }

/// Random expression over `vars`; constants only when `vars` is empty.
inline Expr random_expr(Rng& rng, const std::vector<std::string>& vars, std::size_t depth) {
    if (vars.empty()) return Expr::constant(coin(rng));
    if (depth == 0 || coin(rng, 0.3)) {
        if (coin(rng, 0.05)) return Expr::constant(coin(rng));
        return Expr::var(pick(rng, vars));
    }
    switch (uniform(rng, 0, 3)) {
    case 0: return Expr::negate(random_expr(rng, vars, depth - 1));
    case 1: return Expr::conj(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    case 2: return Expr::disj(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    default: return Expr::exor(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    }
}

struct BcnShape {
    std::size_t min_states = 1, max_states = 4;
    std::size_t min_inputs = 0, max_inputs = 2;
    std::size_t min_outputs = 1, max_outputs = 2;
    std::size_t depth = 3;
};

inline std::vector<std::string> names(const char* prefix, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

/// Outputs read states only; updates read states and inputs.
inline Bcn random_bcn(Rng& rng, const BcnShape& shape = {}) {
    const auto states = names("x", uniform(rng, shape.min_states, shape.max_states));
    const auto inputs = names("u", uniform(rng, shape.min_inputs, shape.max_inputs));
    const auto outputs = names("y", uniform(rng, shape.min_outputs, shape.max_outputs));
    std::vector<std::string> update_vars = states;
    update_vars.insert(update_vars.end(), inputs.begin(), inputs.end());
    std::vector<Expr> updates, outs;
    for (std::size_t i = 0; i < states.size(); ++i) updates.push_back(random_expr(rng, update_vars, shape.depth));
    for (std::size_t i = 0; i < outputs.size(); ++i) outs.push_back(random_expr(rng, states, shape.depth));
    return Bcn(states, inputs, outputs, updates, outs);
}

/// Every node in one of `k` blocks, every block nonempty (needs k <= node count).
inline std::vector<Block> random_partition(Rng& rng, const Bcn& bcn, std::size_t k) {
    std::vector<std::string> nodes = bcn.states();
    nodes.insert(nodes.end(), bcn.inputs().begin(), bcn.inputs().end());
    nodes.insert(nodes.end(), bcn.outputs().begin(), bcn.outputs().end());
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<Block> blocks(k);
    for (std::size_t i = 0; i < k; ++i) blocks[i].name = "B" + std::to_string(i + 1);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        blocks[i < k ? i : uniform(rng, 0, k - 1)].nodes.push_back(nodes[i]);
    return blocks;
}

/// A network built around a chain of k blocks: updates read states of the
/// same or earlier blocks (inputs likewise), outputs read states of their own
/// block, so the block layout is an acyclic aggregation by construction.
struct LayeredModel {
    Bcn bcn;
    std::vector<Block> blocks;
};

inline LayeredModel random_layered(Rng& rng, std::size_t n, std::size_t m, std::size_t k, std::size_t depth = 2) {
    const auto states = names("x", n);
    const auto inputs = names("u", m);
    std::vector<std::size_t> state_block(n);
    for (std::size_t i = 0; i < n; ++i) state_block[i] = i < k ? i : uniform(rng, 0, k - 1);
    std::vector<Block> blocks(k);
    for (std::size_t b = 0; b < k; ++b) blocks[b].name = "B" + std::to_string(b + 1);
    for (std::size_t i = 0; i < n; ++i) blocks[state_block[i]].nodes.push_back(states[i]);
    std::vector<std::size_t> input_block(m);
    for (std::size_t j = 0; j < m; ++j) {
        input_block[j] = uniform(rng, 0, k - 1);
        blocks[input_block[j]].nodes.push_back(inputs[j]);
    }

    std::vector<Expr> updates;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> vars;
        for (std::size_t j = 0; j < n; ++j)
            if (state_block[j] < state_block[i] ? coin(rng, 0.5) : state_block[j] == state_block[i]) vars.push_back(states[j]);
        for (std::size_t j = 0; j < m; ++j)
            if (input_block[j] <= state_block[i] && coin(rng, 0.5)) vars.push_back(inputs[j]);
        updates.push_back(random_expr(rng, vars, depth));
    }
    std::vector<std::string> outputs;
    std::vector<Expr> outs;
    for (std::size_t b = 0; b < k; ++b) {
        std::vector<std::string> own;
        for (std::size_t i = 0; i < n; ++i)
            if (state_block[i] == b) own.push_back(states[i]);
        const std::size_t q = uniform(rng, 1, 2);
        for (std::size_t j = 0; j < q; ++j) {
            outputs.push_back("y" + std::to_string(outputs.size() + 1));
            outs.push_back(random_expr(rng, own, depth));
            blocks[b].nodes.push_back(outputs.back());
        }
    }
    return {Bcn(states, inputs, outputs, updates, outs), blocks};
}

}  // namespace bcnobs::testing
