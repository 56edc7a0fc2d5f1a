#include "bcnobs/aggregation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace bcnobs {

Aggregation::Aggregation(Bcn bcn, std::vector<Block> blocks)
    : bcn_(std::make_shared<const Bcn>(std::move(bcn))),
      graph_(std::make_shared<const NetworkGraph>(derive_network_graph(*bcn_))),
      blocks_(std::move(blocks)) {
    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
    owner_.assign(graph_->nodes.size(), unassigned);
    std::set<std::string> names;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto& block = blocks_[b];
        if (block.name.empty()) throw AggregationError("block without a name");
        if (!names.insert(block.name).second) throw AggregationError("block '" + block.name + "' defined twice");
        if (block.nodes.empty()) throw AggregationError("block '" + block.name + "' is empty");
        for (const auto& n : block.nodes) {
            auto id = graph_->find(n);
            if (!id) throw AggregationError("unknown node '" + n + "' in block '" + block.name + "'");
            if (owner_[*id] != unassigned)
                throw AggregationError("node '" + n + "' is in blocks '" + blocks_[owner_[*id]].name + "' and '" +
                                       block.name + "'");
            owner_[*id] = b;
        }
    }
    for (std::size_t id = 0; id < graph_->nodes.size(); ++id) {
        if (owner_[id] != unassigned) continue;
        const auto& name = graph_->nodes[id].name;
        if (auto s = bcn_->observed_state(name)) {
            auto sid = *graph_->find(*s);
            if (owner_[sid] != unassigned) {
                owner_[id] = owner_[sid];
                blocks_[owner_[sid]].nodes.push_back(name);
                continue;
            }
        }
        throw AggregationError("node '" + name + "' is not covered by any block");
    }
    if (blocks_.size() < 2) throw AggregationError("an aggregation needs at least two blocks");
}

std::size_t Aggregation::block_of(const std::string& node) const {
    auto id = graph_->find(node);
    if (!id) throw AggregationError("unknown node '" + node + "'");
    return owner_[*id];
}

std::optional<std::size_t> Aggregation::find_block(const std::string& name) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (blocks_[b].name == name) return b;
    return std::nullopt;
}

std::vector<std::string> Aggregation::members_of(std::size_t i, NodeClass cls) const {
    std::vector<std::string> out;
    for (std::size_t id = 0; id < graph_->nodes.size(); ++id)
        if (owner_[id] == i && graph_->nodes[id].cls == cls) out.push_back(graph_->nodes[id].name);
    return out;
}

std::vector<std::string> Aggregation::states_of(std::size_t i) const { return members_of(i, NodeClass::state); }
std::vector<std::string> Aggregation::inputs_of(std::size_t i) const { return members_of(i, NodeClass::input); }
std::vector<std::string> Aggregation::outputs_of(std::size_t i) const { return members_of(i, NodeClass::output); }

bool operator==(const Aggregation& a, const Aggregation& b) { return a.blocks_ == b.blocks_ && *a.bcn_ == *b.bcn_; }

Aggregation rebind(const Aggregation& agg, Bcn bcn) {
    std::vector<Block> blocks = agg.blocks();
    // Generated outputs missing from the new BCN are dropped; new ones are placed on construction.
    for (auto& b : blocks)
        std::erase_if(b.nodes, [&](const std::string& n) {
            return agg.bcn().observed_state(n).has_value() && !bcn.classify(n).has_value();
        });
    return Aggregation(std::move(bcn), std::move(blocks));
}

namespace {

BlockReport check_block(const Aggregation& agg, std::size_t i) {
    const auto& g = agg.network();
    BlockReport r;
    r.block = i;
    r.name = agg.blocks()[i].name;

    std::vector<std::vector<std::size_t>> children(g.nodes.size()), parents(g.nodes.size());
    for (auto [t, h] : g.edges) {
        children[t].push_back(h);
        parents[h].push_back(t);
    }
    auto inside = [&](std::size_t id) { return agg.block_of_node(id) == i; };

    std::set<std::size_t> tails;
    std::vector<std::size_t> states, admissible;
    for (std::size_t id = 0; id < g.nodes.size(); ++id) {
        if (!inside(id)) continue;
        for (auto p : parents[id])
            if (!inside(p)) tails.insert(p);
        if (g.nodes[id].cls == NodeClass::state) states.push_back(id);
        if (g.nodes[id].cls != NodeClass::output) continue;
        r.has_output = true;
        const bool local = std::all_of(parents[id].begin(), parents[id].end(), inside);
        if (local)
            admissible.push_back(id);
        else {
            r.outputs_local = false;
            r.nonlocal_outputs.push_back(g.nodes[id].name);
        }
    }
    // Inputs are numbered before states in a sub-BCN, so list them first.
    for (auto t : tails)
        if (g.nodes[t].cls == NodeClass::input) r.external_inputs.push_back(g.nodes[t].name);
    for (auto t : tails)
        if (g.nodes[t].cls == NodeClass::state) r.external_inputs.push_back(g.nodes[t].name);

    r.vacuous = states.empty();
    const std::set<std::size_t> targets(admissible.begin(), admissible.end());
    for (auto x : states) {
        std::vector<bool> seen(g.nodes.size(), false);
        std::deque<std::size_t> queue{x};
        seen[x] = true;
        bool found = false;
        while (!queue.empty() && !found) {
            auto v = queue.front();
            queue.pop_front();
            for (auto w : children[v]) {
                if (!inside(w) || seen[w]) continue;
                if (targets.count(w)) {
                    found = true;
                    break;
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
        if (!found) {
            r.states_reach_output = false;
            r.stranded_states.push_back(g.nodes[x].name);
        }
    }
    return r;
}

std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

}  // namespace

ValidationReport validate_assumption1(const Aggregation& agg) {
    ValidationReport report;
    for (std::size_t i = 0; i < agg.size(); ++i) report.blocks.push_back(check_block(agg, i));
    return report;
}

bool ValidationReport::passed() const noexcept {
    return std::all_of(blocks.begin(), blocks.end(), [](const BlockReport& b) { return b.passed(); });
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    for (const auto& b : blocks) {
        os << b.name << ": " << (b.passed() ? "pass" : "FAIL");
        if (b.vacuous) os << " (no state nodes; vacuously positive)";
        os << '\n';
        if (!b.has_output) os << "  (a) FAIL: block has no output node\n";
        if (!b.outputs_local) os << "  FAIL: outputs read states outside the block: " << join(b.nonlocal_outputs) << '\n';
        if (!b.states_reach_output)
            os << "  (b) FAIL: no in-block path to an admissible output from: " << join(b.stranded_states) << '\n';
        if (!b.external_inputs.empty()) os << "  inputs from outside: " << join(b.external_inputs) << '\n';
    }
    return os.str();
}

std::string ValidationReport::to_kv() const {
    std::ostringstream os;
    auto line = [&](const BlockReport& b, const char* check, bool ok, const std::string& detail) {
        os << "block=" << b.name << " check=" << check << " result=" << (ok ? "pass" : "fail") << " detail=\""
           << detail << "\"\n";
    };
    for (const auto& b : blocks) {
        line(b, "has-output", b.has_output, b.has_output ? "" : "no output node");
        line(b, "output-locality", b.outputs_local, join(b.nonlocal_outputs, " "));
        line(b, "state-reaches-output", b.states_reach_output, join(b.stranded_states, " "));
        line(b, "external-inputs", true, join(b.external_inputs, " "));
        if (b.vacuous) line(b, "vacuous", true, "no state nodes");
    }
    return os.str();
}

std::vector<std::size_t> AggregationGraph::successors(std::size_t block) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges)
        if (e.from == block) out.push_back(e.to);
    return out;
}

std::size_t AggregationGraph::indegree(std::size_t block) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.to == block; }));
}

AggregationGraph build_aggregation_graph(const Aggregation& agg) {
    AggregationGraph ag;
    for (const auto& b : agg.blocks()) ag.names.push_back(b.name);
    const auto& g = agg.network();
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::string, std::string>>> crossing;
    for (auto [t, h] : g.edges) {
        const auto bt = agg.block_of_node(t), bh = agg.block_of_node(h);
        if (bt != bh) crossing[{bt, bh}].emplace_back(g.nodes[t].name, g.nodes[h].name);
    }
    for (auto& [key, list] : crossing) ag.edges.push_back({key.first, key.second, std::move(list)});
    return ag;
}

std::optional<std::vector<std::size_t>> find_cycle(const AggregationGraph& ag) {
    const std::size_t s = ag.size();
    std::vector<std::vector<std::size_t>> succ(s);
    for (const auto& e : ag.edges) succ[e.from].push_back(e.to);
    enum Color : std::uint8_t { white, grey, black };
    std::vector<Color> color(s, white);
    std::vector<std::size_t> stack;

    std::optional<std::vector<std::size_t>> found;
    auto dfs = [&](auto&& self, std::size_t v) -> void {
        color[v] = grey;
        stack.push_back(v);
        for (auto w : succ[v]) {
            if (found) return;
            if (color[w] == grey) {
                auto it = std::find(stack.begin(), stack.end(), w);
                found = std::vector<std::size_t>(it, stack.end());
                return;
            }
            if (color[w] == white) self(self, w);
        }
        stack.pop_back();
        color[v] = black;
    };
    for (std::size_t v = 0; v < s && !found; ++v)
        if (color[v] == white) dfs(dfs, v);
    return found;
}

bool is_acyclic(const AggregationGraph& ag) { return !find_cycle(ag).has_value(); }

std::vector<std::size_t> topological_order(const AggregationGraph& ag) {
    const std::size_t s = ag.size();
    std::vector<std::size_t> indeg(s, 0);
    std::vector<std::vector<std::size_t>> succ(s);
    for (const auto& e : ag.edges) {
        ++indeg[e.to];
        succ[e.from].push_back(e.to);
    }
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < s; ++v)
        if (indeg[v] == 0) ready.insert(v);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const auto v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (auto w : succ[v])
            if (--indeg[w] == 0) ready.insert(w);
    }
    if (order.size() != s) {
        auto cycle = find_cycle(ag).value_or(std::vector<std::size_t>{});
        std::string text;
        for (auto b : cycle) text += ag.names[b] + " -> ";
        if (!cycle.empty()) text += ag.names[cycle.front()];
        throw CycleError("aggregation graph has a cycle: " + text, std::move(cycle));
    }
    return order;
}

bool is_cascading(const Aggregation& agg) {
    const auto& g = agg.network();
    const std::size_t s = agg.size();
    // needs[j]: blocks that must already be placed before block j can join the prefix.
    std::vector<std::set<std::size_t>> needs(s);
    for (auto [t, h] : g.edges) {
        const auto bt = agg.block_of_node(t), bh = agg.block_of_node(h);
        if (bt != bh) needs[bh].insert(bt);
    }
    std::vector<bool> placed(s, false);
    std::size_t count = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t j = 0; j < s; ++j) {
            if (placed[j]) continue;
            if (std::all_of(needs[j].begin(), needs[j].end(), [&](std::size_t b) { return placed[b]; })) {
                placed[j] = true;
                ++count;
                grew = true;
            }
        }
    }
    return count == s;
}

SubBcn extract_sub_bcn(const Aggregation& agg, std::size_t i, bool require_reachability) {
    if (i >= agg.size()) throw AggregationError("block index out of range");
    const auto report = check_block(agg, i);
    if (!report.has_output) throw AggregationError("block '" + report.name + "' has no output node");
    if (!report.outputs_local)
        throw AggregationError("block '" + report.name + "' has outputs reading foreign states: " +
                               join(report.nonlocal_outputs));
    if (require_reachability && !report.states_reach_output)
        throw AggregationError("block '" + report.name + "' fails the reachability condition at: " +
                               join(report.stranded_states));

    SubBcn sub;
    sub.block = i;
    sub.name = report.name;
    sub.external_inputs = report.external_inputs;
    const auto states = agg.states_of(i);
    if (states.empty()) return sub;

    const Bcn& parent = agg.bcn();
    const auto own_inputs = agg.inputs_of(i);
    std::set<std::string> wanted(own_inputs.begin(), own_inputs.end());
    wanted.insert(report.external_inputs.begin(), report.external_inputs.end());
    std::vector<std::string> inputs;
    for (const auto& u : parent.inputs())
        if (wanted.count(u)) inputs.push_back(u);
    for (const auto& x : parent.states())
        if (wanted.count(x)) inputs.push_back(x);

    const auto outputs = agg.outputs_of(i);
    std::vector<Expr> updates, output_exprs;
    for (const auto& x : states) updates.push_back(parent.update_of(x));
    for (const auto& y : outputs) output_exprs.push_back(parent.output_of(y));
    sub.bcn.emplace(states, inputs, outputs, std::move(updates), std::move(output_exprs));
    return sub;
}

}  // namespace bcnobs
