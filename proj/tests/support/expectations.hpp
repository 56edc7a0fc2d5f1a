#pragma once

// Recomputes a catalog Expectation from the live implementation and
// renders it in the catalog's value notation.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "bcnobs/models.hpp"
#include "bcnobs/pipeline.hpp"

namespace bcnobs::testing {

inline std::string join_names(std::vector<std::string> xs, bool sort, char sep = ',') {
    if (sort) std::sort(xs.begin(), xs.end());
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string part; std::getline(in, part, ',');)
        if (!part.empty()) out.push_back(part);
    return out;
}

inline Property property_named(const std::string& p) {
    return p == "recon" ? Property::reconstructibility : Property::observability;
}

inline std::string evaluate(const LoadedModel& m, const Expectation& e) {
    const Property prop = property_named(e.property);
    const PairKind kind = prop == Property::observability ? PairKind::owpg : PairKind::rwpg;
    const std::vector<std::string> observed =
        m.observation_sets.count(e.observe) ? m.observation_set(e.observe) : split_commas(e.observe);

    if (e.check == "passes") {
        const auto& agg = m.aggregation(e.aggregation);
        return block_passes(agg, *agg.find_block(e.block), prop, observed) ? "true" : "false";
    }

    const Bcn bcn = observed.empty() ? m.bcn : m.bcn.with_observations(observed);
    std::optional<Aggregation> agg;
    if (!e.aggregation.empty()) agg = rebind(m.aggregation(e.aggregation), bcn);
    auto block_index = [&] { return *agg->find_block(e.block); };
    auto target = [&]() -> Bcn {
        if (e.block.empty()) return bcn;
        return *extract_sub_bcn(*agg, block_index(), false).bcn;
    };
    auto names_of = [&](const std::vector<std::size_t>& ids) {
        std::vector<std::string> out;
        for (auto i : ids) out.push_back(agg->blocks()[i].name);
        return join_names(out, false);
    };

    if (e.check == "verdict") return verify_direct(bcn, prop).positive ? "positive" : "negative";
    if (e.check == "owpg") {
        const auto s = pair_graph_stats(build_pair_graph(target(), PairKind::owpg));
        return std::to_string(s.diagonal) + "/" + std::to_string(s.non_diagonal);
    }
    if (e.check == "lasso") {
        const Bcn b = target();
        const auto g = build_pair_graph(b, kind);
        const auto parts = split_commas(e.start);
        const auto v = g.find(StateVec::from_string(parts.at(0)).code(), StateVec::from_string(parts.at(1)).code());
        if (!v) return "no such vertex";
        const auto w = lasso_from(g, *v, kind == PairKind::owpg);
        return w ? w->to_string() : "none";
    }
    if (e.check == "acyclic") return is_acyclic(build_aggregation_graph(*agg)) ? "true" : "false";
    if (e.check == "order") return names_of(topological_order(build_aggregation_graph(*agg)));
    if (e.check == "cycle") {
        const auto c = find_cycle(build_aggregation_graph(*agg));
        return c ? names_of(*c) : "none";
    }
    if (e.check == "cost") {
        const auto est = estimate_cost(*agg);
        return est.aggregated.str() + "/" + est.direct.str();
    }
    if (e.check == "decomposed" || e.check == "block" || e.check == "admissible") {
        const auto dv = verify_decomposed(*agg, prop);
        if (e.check == "decomposed") return to_string(dv.overall);
        if (e.check == "admissible") return dv.admissible ? "true" : "false";
        return to_string(dv.blocks.at(block_index()).status);
    }
    if (e.check == "minimal" || e.check == "necessary") {
        const auto mode = e.check == "minimal" ? SearchMode::exhaustive : SearchMode::leave_one_out;
        const auto r = analyze_observation_sets(*agg, block_index(), prop, mode);
        if (e.check == "necessary") return join_names(r.necessary, true);
        std::vector<std::string> sets;
        for (const auto& s : r.minimal_sets) sets.push_back(join_names(s, true));
        return join_names(sets, true, ';');
    }
    return "unknown check '" + e.check + "'";
}

}  // namespace bcnobs::testing
