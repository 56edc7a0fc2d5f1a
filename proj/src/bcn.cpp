#include "bcnobs/bcn.hpp"

#include <algorithm>

namespace bcnobs {

const char* to_string(NodeClass cls) {
    switch (cls) {
    case NodeClass::state: return "state";
    case NodeClass::input: return "input";
    case NodeClass::output: return "output";
    }
    return "?";
}

const char* to_string(Property p) { return p == Property::observability ? "observability" : "reconstructibility"; }

Bcn::Bcn(std::vector<std::string> states, std::vector<std::string> inputs, std::vector<std::string> outputs,
         std::vector<Expr> updates, std::vector<Expr> output_exprs, Options options)
    : states_(std::move(states)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      updates_(std::move(updates)),
      output_exprs_(std::move(output_exprs)),
      options_(options) {
    if (states_.empty()) throw ModelError("a BCN needs at least one state node");
    if (outputs_.empty() && !options_.allow_no_outputs) throw ModelError("a BCN needs at least one output node");
    if (updates_.size() != states_.size()) throw ModelError("one update expression per state node required");
    if (output_exprs_.size() != outputs_.size()) throw ModelError("one expression per output node required");
    if (states_.size() + inputs_.size() > 64) throw ModelError("more than 64 state and input nodes");
    if (outputs_.size() > 64) throw ModelError("more than 64 output nodes");

    auto add = [&](const std::string& name, NodeClass cls, std::size_t i) {
        if (name.empty()) throw ModelError("empty node name");
        if (!index_.emplace(name, std::pair{cls, i}).second) throw ModelError("duplicate node name '" + name + "'");
    };
    for (std::size_t i = 0; i < states_.size(); ++i) add(states_[i], NodeClass::state, i);
    for (std::size_t i = 0; i < inputs_.size(); ++i) add(inputs_[i], NodeClass::input, i);
    for (std::size_t i = 0; i < outputs_.size(); ++i) add(outputs_[i], NodeClass::output, i);

    std::map<std::string, unsigned> slots;
    for (std::size_t i = 0; i < states_.size(); ++i) slots[states_[i]] = static_cast<unsigned>(i);
    for (std::size_t j = 0; j < inputs_.size(); ++j) slots[inputs_[j]] = static_cast<unsigned>(states_.size() + j);

    for (std::size_t i = 0; i < states_.size(); ++i) {
        for (const auto& v : updates_[i].variables()) {
            auto c = classify(v);
            if (!c || *c == NodeClass::output)
                throw ModelError("update of '" + states_[i] + "' references '" + v +
                                 "', which is not a state or input node");
        }
        compiled_updates_.emplace_back(updates_[i], slots);
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) {
        for (const auto& v : output_exprs_[k].variables()) {
            auto c = classify(v);
            if (!c || *c != NodeClass::state)
                throw ModelError("output '" + outputs_[k] + "' references '" + v + "', which is not a state node");
        }
        compiled_outputs_.emplace_back(output_exprs_[k], slots);
    }
}

const Expr& Bcn::update_of(const std::string& state) const {
    auto i = state_index(state);
    if (!i) throw ModelError("unknown state node '" + state + "'");
    return updates_[*i];
}

const Expr& Bcn::output_of(const std::string& output) const {
    auto i = output_index(output);
    if (!i) throw ModelError("unknown output node '" + output + "'");
    return output_exprs_[*i];
}

std::optional<NodeClass> Bcn::classify(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second.first;
}

namespace {

std::optional<std::size_t> lookup(const std::map<std::string, std::pair<NodeClass, std::size_t>>& index,
                                  const std::string& name, NodeClass cls) {
    auto it = index.find(name);
    if (it == index.end() || it->second.first != cls) return std::nullopt;
    return it->second.second;
}

}  // namespace

std::optional<std::size_t> Bcn::state_index(const std::string& name) const { return lookup(index_, name, NodeClass::state); }
std::optional<std::size_t> Bcn::input_index(const std::string& name) const { return lookup(index_, name, NodeClass::input); }
std::optional<std::size_t> Bcn::output_index(const std::string& name) const { return lookup(index_, name, NodeClass::output); }

std::optional<std::string> Bcn::observed_state(const std::string& output) const {
    auto it = observation_of_.find(output);
    if (it == observation_of_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t Bcn::step_code(std::uint64_t x, std::uint64_t u) const noexcept {
    const std::uint64_t env = x | (u << states_.size());
    std::uint64_t next = 0;
    for (std::size_t i = 0; i < compiled_updates_.size(); ++i)
        if (compiled_updates_[i].eval(env)) next |= std::uint64_t{1} << i;
    return next;
}

std::uint64_t Bcn::observe_code(std::uint64_t x) const noexcept {
    std::uint64_t y = 0;
    for (std::size_t k = 0; k < compiled_outputs_.size(); ++k)
        if (compiled_outputs_[k].eval(x)) y |= std::uint64_t{1} << k;
    return y;
}

StateVec Bcn::step(const StateVec& x, const InputVec& u) const {
    if (x.width() != num_states()) throw std::invalid_argument("state width mismatch");
    if (u.width() != num_inputs()) throw std::invalid_argument("input width mismatch");
    return StateVec(step_code(x.code(), u.code()), static_cast<unsigned>(num_states()));
}

OutputVec Bcn::observe(const StateVec& x) const {
    if (x.width() != num_states()) throw std::invalid_argument("state width mismatch");
    return OutputVec(observe_code(x.code()), static_cast<unsigned>(num_outputs()));
}

Bcn Bcn::with_observations(const std::vector<std::string>& states) const {
    std::set<std::string> seen;
    auto outputs = outputs_;
    auto exprs = output_exprs_;
    std::vector<std::pair<std::string, std::string>> added;
    for (const auto& s : states) {
        if (!state_index(s)) throw ModelError("cannot observe '" + s + "': not a state node");
        if (!seen.insert(s).second) throw ModelError("state node '" + s + "' listed twice for observation");
        const std::string name = kObservationPrefix + s;
        if (classify(name)) throw ModelError("output '" + name + "' already exists");
        outputs.push_back(name);
        exprs.push_back(Expr::var(s));
        added.emplace_back(name, s);
    }
    Options opts = options_;
    Bcn out(states_, inputs_, std::move(outputs), updates_, std::move(exprs), opts);
    out.observed_ = observed_;
    out.observation_of_ = observation_of_;
    for (auto& [o, s] : added) {
        out.observed_.push_back(s);
        out.observation_of_[o] = s;
    }
    return out;
}

bool operator==(const Bcn& a, const Bcn& b) {
    return a.states_ == b.states_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_ &&
           a.updates_ == b.updates_ && a.output_exprs_ == b.output_exprs_ && a.observed_ == b.observed_;
}

StateVec make_state(const Bcn& bcn, std::uint64_t code) { return StateVec(code, static_cast<unsigned>(bcn.num_states())); }
InputVec make_input(const Bcn& bcn, std::uint64_t code) { return InputVec(code, static_cast<unsigned>(bcn.num_inputs())); }

std::size_t NetworkGraph::indegree(std::size_t node) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](auto& e) { return e.second == node; }));
}

std::size_t NetworkGraph::outdegree(std::size_t node) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](auto& e) { return e.first == node; }));
}

std::vector<std::size_t> NetworkGraph::parents(std::size_t node) const {
    std::vector<std::size_t> out;
    for (auto& [t, h] : edges)
        if (h == node) out.push_back(t);
    return out;
}

std::vector<std::size_t> NetworkGraph::children(std::size_t node) const {
    std::vector<std::size_t> out;
    for (auto& [t, h] : edges)
        if (t == node) out.push_back(h);
    return out;
}

std::optional<std::size_t> NetworkGraph::find(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].name == name) return i;
    return std::nullopt;
}

std::set<std::pair<std::string, std::string>> NetworkGraph::named_edges() const {
    std::set<std::pair<std::string, std::string>> out;
    for (auto& [t, h] : edges) out.emplace(nodes[t].name, nodes[h].name);
    return out;
}

NetworkGraph derive_network_graph(const Bcn& bcn) {
    NetworkGraph g;
    std::map<std::string, std::size_t> id;
    auto add = [&](const std::string& name, NodeClass cls) {
        id[name] = g.nodes.size();
        g.nodes.push_back({name, cls});
    };
    for (auto& s : bcn.states()) add(s, NodeClass::state);
    for (auto& u : bcn.inputs()) add(u, NodeClass::input);
    for (auto& y : bcn.outputs()) add(y, NodeClass::output);

    for (std::size_t i = 0; i < bcn.num_states(); ++i)
        for (auto& v : bcn.updates()[i].variables()) g.edges.emplace_back(id.at(v), id.at(bcn.states()[i]));
    for (std::size_t k = 0; k < bcn.num_outputs(); ++k)
        for (auto& v : bcn.output_exprs()[k].variables()) g.edges.emplace_back(id.at(v), id.at(bcn.outputs()[k]));
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

std::vector<std::pair<std::string, std::string>> vacuous_edges(const Bcn& bcn) {
    std::vector<std::pair<std::string, std::string>> out;
    auto check = [&](const std::string& head, const Expr& e) {
        const auto syntactic = e.variables();
        if (syntactic.size() > kMaxSupportVariables) return;
        const auto semantic = semantic_support(e);
        for (auto& v : syntactic)
            if (!semantic.count(v)) out.emplace_back(v, head);
    };
    for (std::size_t i = 0; i < bcn.num_states(); ++i) check(bcn.states()[i], bcn.updates()[i]);
    for (std::size_t k = 0; k < bcn.num_outputs(); ++k) check(bcn.outputs()[k], bcn.output_exprs()[k]);
    return out;
}

}  // namespace bcnobs
