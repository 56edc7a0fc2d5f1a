#include "bcnobs/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "parallel.hpp"

namespace bcnobs {

unsigned default_workers() {
    if (const char* env = std::getenv("BCNOBS_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 256L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

unsigned resolve_workers(const RunOptions& o) { return o.workers ? o.workers : default_workers(); }

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += ", ";
        out += x;
    }
    return out;
}

PairKind kind_for(Property p) { return p == Property::observability ? PairKind::owpg : PairKind::rwpg; }

}  // namespace

Verdict verify_direct(const Bcn& bcn, Property property, unsigned cap) {
    if (bcn.num_outputs() == 0) throw ModelError("network has no output nodes; add observations first");
    const auto g = build_pair_graph(bcn, kind_for(property), cap);
    return property == Property::observability ? is_observable(g) : is_reconstructible(g);
}

const char* to_string(BlockStatus s) {
    switch (s) {
    case BlockStatus::positive: return "positive";
    case BlockStatus::negative: return "negative";
    case BlockStatus::vacuous: return "vacuous";
    case BlockStatus::unverified: return "unverified";
    case BlockStatus::skipped: return "skipped";
    }
    return "?";
}

const char* to_string(Overall o) { return o == Overall::proved ? "PROVED" : "INCONCLUSIVE"; }

DecomposedVerdict verify_decomposed(const Aggregation& agg, Property property, RunOptions options) {
    DecomposedVerdict dv;
    dv.property = property;
    dv.validation = validate_assumption1(agg);
    const auto ag = build_aggregation_graph(agg);
    dv.cycle = find_cycle(ag);
    dv.acyclic = !dv.cycle.has_value();
    if (dv.acyclic) dv.order = topological_order(ag);
    else {
        std::string text;
        for (auto b : *dv.cycle) text += ag.names[b] + " -> ";
        dv.notes.push_back("aggregation graph has a cycle: " + text + ag.names[dv.cycle->front()]);
    }

    const bool need_reach = property == Property::observability;
    dv.admissible = true;
    for (const auto& b : dv.validation.blocks) {
        if (!b.has_output) dv.notes.push_back("block " + b.name + " has no output node");
        if (!b.outputs_local)
            dv.notes.push_back("block " + b.name + " has outputs reading foreign states: " + join(b.nonlocal_outputs));
        if (!b.states_reach_output) {
            dv.notes.push_back("block " + b.name + " has states with no in-block path to an admissible output: " +
                               join(b.stranded_states) + (need_reach ? "" : " (not required for reconstructibility)"));
        }
        const bool ok = b.has_output && b.outputs_local && (!need_reach || b.states_reach_output);
        dv.admissible = dv.admissible && ok;
        if (b.vacuous) dv.notes.push_back("block " + b.name + " has no state nodes and is vacuously positive");
    }

    dv.blocks.resize(agg.size());
    detail::parallel_for(agg.size(), resolve_workers(options), [&](std::size_t i) {
        auto& bv = dv.blocks[i];
        bv.block = i;
        bv.name = agg.blocks()[i].name;
        SubBcn sub;
        try {
            sub = extract_sub_bcn(agg, i, need_reach);
        } catch (const AggregationError& e) {
            bv.status = BlockStatus::skipped;
            bv.detail = e.what();
            return;
        }
        if (sub.vacuous()) {
            bv.status = BlockStatus::vacuous;
            bv.q = agg.outputs_of(i).size();
            return;
        }
        const Bcn& b = *sub.bcn;
        bv.n = b.num_states();
        bv.m = b.num_inputs();
        bv.q = b.num_outputs();
        try {
            const auto g = build_pair_graph(b, kind_for(property), options.cap);
            bv.stats = pair_graph_stats(g);
            const auto v = property == Property::observability ? is_observable(g) : is_reconstructible(g);
            bv.status = v.positive ? BlockStatus::positive : BlockStatus::negative;
            bv.witness = v.witness;
        } catch (const CapExceeded& e) {
            bv.status = BlockStatus::unverified;
            bv.detail = e.what();
        }
    });

    const bool all_positive = std::all_of(dv.blocks.begin(), dv.blocks.end(), [](const BlockVerdict& b) {
        return b.status == BlockStatus::positive || b.status == BlockStatus::vacuous;
    });
    dv.overall = dv.acyclic && dv.admissible && all_positive ? Overall::proved : Overall::inconclusive;
    return dv;
}

BigInt pair_graph_cost(std::size_t n, std::size_t m) {
    if (n == 0) return 0;
    BigInt c = 1;
    c <<= static_cast<unsigned>(2 * n + m - 1);
    return c;
}

CostEstimate estimate_cost(std::size_t n, std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
    CostEstimate est;
    est.k = blocks.size();
    est.n = n;
    est.m = m;
    est.direct = pair_graph_cost(n, m);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        BlockCost bc{"N" + std::to_string(i + 1), blocks[i].first, blocks[i].second, 0};
        bc.cost = pair_graph_cost(bc.n, bc.m);
        est.aggregated += bc.cost;
        est.blocks.push_back(std::move(bc));
    }
    if (est.k > 0) {
        const long double k = static_cast<long double>(est.k);
        est.idealized = k * std::pow(2.0L, static_cast<long double>(2 * n + m) / k - 1.0L);
    }
    est.aggregated_below_direct = est.aggregated < est.direct;
    return est;
}

CostEstimate estimate_cost(const Aggregation& agg) {
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    for (std::size_t i = 0; i < agg.size(); ++i) {
        // Sub-BCN inputs: own input nodes plus external tails.
        std::set<std::string> inputs;
        for (const auto& u : agg.inputs_of(i)) inputs.insert(u);
        const auto& g = agg.network();
        for (auto [t, h] : g.edges)
            if (agg.block_of_node(h) == i && agg.block_of_node(t) != i) inputs.insert(g.nodes[t].name);
        sizes.emplace_back(agg.states_of(i).size(), inputs.size());
    }
    auto est = estimate_cost(agg.bcn().num_states(), agg.bcn().num_inputs(), sizes);
    for (std::size_t i = 0; i < agg.size(); ++i) est.blocks[i].name = agg.blocks()[i].name;
    return est;
}

Bcn add_observations(const Bcn& bcn, const std::vector<std::string>& states) { return bcn.with_observations(states); }

bool block_passes(const Aggregation& agg, std::size_t block, Property property,
                  const std::vector<std::string>& observed, unsigned cap) {
    const Aggregation a = observed.empty() ? agg : rebind(agg, agg.bcn().with_observations(observed));
    SubBcn sub;
    try {
        sub = extract_sub_bcn(a, block, false);
    } catch (const AggregationError&) {
        return false;
    }
    if (sub.vacuous()) return true;
    const auto g = build_pair_graph(*sub.bcn, kind_for(property), cap);
    return (property == Property::observability ? is_observable(g) : is_reconstructible(g)).positive;
}

ObservationSetReport analyze_observation_sets(const Aggregation& agg, std::size_t block, Property property,
                                              SearchMode mode, RunOptions options) {
    if (block >= agg.size()) throw AggregationError("block index out of range");
    ObservationSetReport r;
    r.block = block;
    r.name = agg.blocks()[block].name;
    r.property = property;
    r.mode = mode;
    for (const auto& x : agg.states_of(block)) {
        const auto& observed = agg.bcn().observed_states();
        if (std::find(observed.begin(), observed.end(), x) == observed.end()) r.candidates.push_back(x);
    }
    const std::size_t k = r.candidates.size();
    if (mode == SearchMode::exhaustive && k > kMaxExhaustivePool)
        throw std::invalid_argument("candidate pool of " + std::to_string(k) + " nodes exceeds the exhaustive limit of " +
                                    std::to_string(kMaxExhaustivePool));
    const unsigned workers = resolve_workers(options);

    auto subset = [&](std::uint64_t mask) {
        std::vector<std::string> s;
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) s.push_back(r.candidates[i]);
        return s;
    };
    auto evaluate = [&](const std::vector<std::uint64_t>& masks) {
        std::vector<char> pass(masks.size(), 0);
        detail::parallel_for(masks.size(), workers, [&](std::size_t j) {
            pass[j] = block_passes(agg, block, property, subset(masks[j]), options.cap);
        });
        r.evaluated += masks.size();
        return pass;
    };

    const std::uint64_t full = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    std::vector<std::uint64_t> loo{full};
    for (std::size_t i = 0; i < k; ++i) loo.push_back(full & ~(std::uint64_t{1} << i));
    const auto loo_pass = evaluate(loo);
    r.full_set_passes = loo_pass[0];
    for (std::size_t i = 0; i < k; ++i)
        if (!loo_pass[i + 1]) r.necessary.push_back(r.candidates[i]);

    if (mode == SearchMode::exhaustive) {
        // Observing more never hurts, so supersets of a passing set are skipped.
        std::vector<std::uint64_t> minimal;
        for (std::size_t size = 0; size <= k; ++size) {
            std::vector<std::uint64_t> level;
            for (std::uint64_t mask = 0; mask <= full; ++mask) {
                if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
                if (std::any_of(minimal.begin(), minimal.end(), [&](std::uint64_t m) { return (mask & m) == m; }))
                    continue;
                level.push_back(mask);
            }
            const auto pass = evaluate(level);
            for (std::size_t j = 0; j < level.size(); ++j)
                if (pass[j]) minimal.push_back(level[j]);
        }
        for (auto m : minimal) r.minimal_sets.push_back(subset(m));
        r.unique = minimal.size() == 1;
    }
    return r;
}

}  // namespace bcnobs
