#include "bcnobs/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "bcnobs/models.hpp"
#include "bcnobs/oracle.hpp"
#include "bcnobs/parser.hpp"
#include "bcnobs/pipeline.hpp"

namespace bcnobs {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    std::vector<std::string> targets;  // [property] model
    std::string agg;
    std::string observe;
    std::string prop;
    std::string replay;
    std::string block;
    std::string mode = "leave-one-out";
    std::string format = "human";
    unsigned cap = kDefaultStateCap;
    unsigned workers = 0;
    std::size_t rounds = 0;

    bool machine() const { return format == "machine"; }
};

// What a command operates on, after resolving names, files and observations.
struct Input {
    std::string label;
    Bcn bcn;
    std::optional<LoadedModel> bundled;
    std::optional<Aggregation> agg;
    std::string agg_label;
    std::vector<std::string> observed;
};

std::optional<std::string> read_file(const std::string& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Property parse_property(const std::string& s) {
    if (s == "obs" || s == "observability") return Property::observability;
    if (s == "recon" || s == "reconstructibility") return Property::reconstructibility;
    throw UsageError("unknown property '" + s + "' (expected obs or recon)");
}

bool is_property_word(const std::string& s) {
    return s == "obs" || s == "recon" || s == "observability" || s == "reconstructibility";
}

Property property_of(const Config& c) {
    if (c.targets.size() == 2) {
        if (!c.prop.empty() && parse_property(c.prop) != parse_property(c.targets[0]))
            throw UsageError("property given twice with different values");
        return parse_property(c.targets[0]);
    }
    return c.prop.empty() ? Property::observability : parse_property(c.prop);
}

const std::string& model_arg(const Config& c) {
    if (c.targets.empty()) throw UsageError("missing model argument");
    if (c.targets.size() == 2 && !is_property_word(c.targets[0]))
        throw UsageError("expected '[obs|recon] MODEL', got '" + c.targets[0] + "'");
    return c.targets.back();
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream words(line);
        for (std::string w; words >> w;) out.push_back(w);
    }
    return out;
}

std::optional<std::string> catalog_name_for_file(const std::string& path) {
    const std::string base = fs::path(path).filename().string();
    for (const auto& m : list_models())
        if (m.bcn_file == base) return m.name;
    return std::nullopt;
}

Input load_input(const Config& c) {
    const std::string& arg = model_arg(c);
    std::optional<LoadedModel> bundled;
    std::optional<Bcn> bcn;
    if (has_model(arg)) {
        bundled = load_model(arg);
    } else if (auto text = read_file(arg)) {
        ParseOptions opts;
        opts.allow_no_outputs = true;
        bcn = parse_bcn(*text, opts);
        // Aggregation and observation-set names of a bundled model stay usable
        // for an on-disk copy of its file.
        if (auto name = catalog_name_for_file(arg)) bundled = load_model(*name);
    } else if (auto name = catalog_name_for_file(arg); name && fs::path(arg).has_filename() &&
                                                        fs::path(arg).parent_path().empty()) {
        bundled = load_model(*name);
    } else {
        throw UsageError("no such model or file: '" + arg + "'");
    }

    Input in{arg, bcn ? *bcn : bundled->bcn, std::nullopt, std::nullopt, "", {}};
    in.bundled = std::move(bundled);

    if (!c.observe.empty()) {
        if (in.bundled && in.bundled->observation_sets.count(c.observe)) in.observed = in.bundled->observation_set(c.observe);
        else if (auto text = read_file(c.observe)) in.observed = split_list(*text);
        else in.observed = split_list(c.observe);
        in.bcn = in.bcn.with_observations(in.observed);
    }

    if (!c.agg.empty()) {
        in.agg_label = c.agg;
        if (auto text = read_file(c.agg)) {
            in.agg = parse_aggregation(*text, in.bcn);
        } else if (in.bundled && in.bundled->aggregations.count(c.agg)) {
            in.agg = rebind(in.bundled->aggregation(c.agg), in.bcn);
        } else {
            std::string_view text;
            try {
                text = bundled_file(c.agg);
            } catch (const UnknownModel&) {
                throw UsageError("no such aggregation or file: '" + c.agg + "'");
            }
            in.agg = parse_aggregation(text, in.bcn);
        }
    }
    return in;
}

const Aggregation& require_agg(const Input& in, const char* command) {
    if (!in.agg) throw UsageError(std::string(command) + " needs --agg");
    return *in.agg;
}

std::size_t require_block(const Aggregation& agg, const std::string& name) {
    if (name.empty()) throw UsageError("missing --block");
    auto b = agg.find_block(name);
    if (!b) throw UsageError("no block named '" + name + "'");
    return *b;
}

std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

std::vector<std::string> block_names(const Aggregation& agg, const std::vector<std::size_t>& ids) {
    std::vector<std::string> out;
    for (auto i : ids) out.push_back(agg.blocks()[i].name);
    return out;
}

json inputs_json(const std::vector<InputVec>& us) {
    json a = json::array();
    for (const auto& u : us) a.push_back(u.str());
    return a;
}

json witness_json(const LassoWitness& w) {
    return {{"start", w.start.str()},
            {"prefix", inputs_json(w.prefix)},
            {"cycle", inputs_json(w.cycle)},
            {"text", w.to_string()}};
}

json stats_json(const PairGraphStats& s) {
    return {{"diagonal", s.diagonal}, {"non_diagonal", s.non_diagonal}, {"edges", s.edges}};
}

const char* adjective(Property p) { return p == Property::observability ? "observable" : "reconstructible"; }

const char* pair_kind_name(Property p) { return p == Property::observability ? "OWPG" : "RWPG"; }

PairKind pair_kind(Property p) { return p == Property::observability ? PairKind::owpg : PairKind::rwpg; }

std::string shape(const Bcn& b) {
    return "n=" + std::to_string(b.num_states()) + " m=" + std::to_string(b.num_inputs()) +
           " q=" + std::to_string(b.num_outputs());
}

void print_trace(const ReplayTrace& t, std::ostream& out) {
    out << "  step  state        state'       output   output'\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& s = t.steps[i];
        out << "  " << std::setw(4) << i << "  " << std::left << std::setw(12) << s.x.str() << " " << std::setw(12)
            << s.x2.str() << " " << std::setw(8) << s.y.str() << " " << s.y2.str() << std::right << "\n";
    }
}

json trace_json(const ReplayTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"x", s.x.str()}, {"x2", s.x2.str()}, {"y", s.y.str()}, {"y2", s.y2.str()}});
    json j{{"steps", steps}};
    j["output_divergence"] = t.output_divergence ? json(*t.output_divergence) : json(nullptr);
    j["states_merged"] = t.states_merged ? json(*t.states_merged) : json(nullptr);
    return j;
}

// Does the trace show an infinite run that the property forbids?
bool trace_confirms(const ReplayTrace& t, PairKind kind) {
    return !t.output_divergence && (kind == PairKind::owpg || !t.states_merged);
}

int cmd_replay(const Config& c, const Input& in, Property prop, std::ostream& out) {
    auto text = read_file(c.replay);
    if (!text) throw UsageError("cannot read witness file '" + c.replay + "'");
    std::string witness_text;  // first non-comment line
    {
        std::istringstream s(*text);
        for (std::string l; std::getline(s, l);) {
            if (auto hash = l.find('#'); hash != std::string::npos) l.erase(hash);
            if (l.find_first_not_of(" \t\r") != std::string::npos) {
                witness_text = l;
                break;
            }
        }
    }
    const PairKind kind = pair_kind(prop);
    const auto w = parse_witness(witness_text, in.bcn, kind);
    const std::size_t rounds = c.rounds ? c.rounds : 2;
    const auto trace = replay_witness(in.bcn, w, rounds);
    const bool ok = trace_confirms(trace, kind);
    if (c.machine()) {
        json j{{"command", "check"},
               {"mode", "replay"},
               {"property", to_string(prop)},
               {"witness", witness_json(w)},
               {"rounds", rounds},
               {"confirmed", ok},
               {"trace", trace_json(trace)}};
        out << j.dump(2) << "\n";
    } else {
        out << "replaying " << w.to_string() << " for " << rounds << " cycle rounds\n";
        print_trace(trace, out);
        if (ok) out << "confirmed: outputs agree at every step, so the network is not " << adjective(prop) << "\n";
        else if (trace.output_divergence) out << "not confirmed: outputs differ at step " << *trace.output_divergence << "\n";
        else out << "not confirmed: the two states merge at step " << *trace.states_merged << "\n";
    }
    return ok ? kExitNegative : kExitInconclusive;
}

int cmd_check(const Config& c, std::ostream& out) {
    const Property prop = property_of(c);
    const Input in = load_input(c);
    if (!c.replay.empty()) return cmd_replay(c, in, prop, out);

    if (!in.agg) {
        const auto v = verify_direct(in.bcn, prop, c.cap);
        std::optional<ReplayTrace> trace;
        if (v.witness && c.rounds) trace = replay_witness(in.bcn, *v.witness, c.rounds);
        if (c.machine()) {
            json j{{"command", "check"},
                   {"mode", "direct"},
                   {"model", in.label},
                   {"property", to_string(prop)},
                   {"n", in.bcn.num_states()},
                   {"m", in.bcn.num_inputs()},
                   {"q", in.bcn.num_outputs()},
                   {"verdict", v.positive ? "positive" : "negative"}};
            j["witness"] = v.witness ? witness_json(*v.witness) : json(nullptr);
            if (trace) j["trace"] = trace_json(*trace);
            out << j.dump(2) << "\n";
        } else {
            out << in.label << " (" << shape(in.bcn) << "): " << (v.positive ? "" : "not ") << adjective(prop) << "\n";
            if (v.witness) {
                out << "witness: " << v.witness->to_string() << "\n";
                if (trace) print_trace(*trace, out);
            }
        }
        return v.positive ? kExitPositive : kExitNegative;
    }

    const auto dv = verify_decomposed(*in.agg, prop, RunOptions{c.cap, c.workers});
    const auto& agg = *in.agg;
    if (c.machine()) {
        json blocks = json::array();
        for (const auto& b : dv.blocks) {
            json jb{{"block", b.name}, {"status", to_string(b.status)}, {"n", b.n}, {"m", b.m}, {"q", b.q}};
            jb["stats"] = b.stats ? stats_json(*b.stats) : json(nullptr);
            jb["witness"] = b.witness ? witness_json(*b.witness) : json(nullptr);
            if (!b.detail.empty()) jb["detail"] = b.detail;
            blocks.push_back(jb);
        }
        json j{{"command", "check"},
               {"mode", "decomposed"},
               {"model", in.label},
               {"aggregation", in.agg_label},
               {"property", to_string(prop)},
               {"observed", in.observed},
               {"acyclic", dv.acyclic},
               {"admissible", dv.admissible}};
        j["order"] = dv.order ? json(block_names(agg, *dv.order)) : json(nullptr);
        j["cycle"] = dv.cycle ? json(block_names(agg, *dv.cycle)) : json(nullptr);
        j["blocks"] = blocks;
        j["overall"] = to_string(dv.overall);
        j["notes"] = dv.notes;
        out << j.dump(2) << "\n";
    } else {
        out << in.label << " (" << shape(in.bcn) << ") with " << in.agg_label << " (" << agg.size()
            << " blocks): " << to_string(prop) << "\n";
        out << "aggregation graph: " << (dv.acyclic ? "acyclic" : "cyclic");
        if (dv.order) out << ", order " << join(block_names(agg, *dv.order), " ");
        out << "\nblock conditions: " << (dv.admissible ? "pass" : "fail") << "\n";
        out << "  block        n   m   q   vertices      edges  status\n";
        for (const auto& b : dv.blocks) {
            out << "  " << std::left << std::setw(10) << b.name << std::right << std::setw(4) << b.n << std::setw(4)
                << b.m << std::setw(4) << b.q;
            if (b.stats) out << std::setw(11) << b.stats->diagonal + b.stats->non_diagonal << std::setw(11) << b.stats->edges;
            else out << std::setw(11) << "-" << std::setw(11) << "-";
            out << "  " << to_string(b.status) << "\n";
            if (b.witness) out << "      witness: " << b.witness->to_string() << "\n";
            if (!b.detail.empty()) out << "      " << b.detail << "\n";
        }
        for (const auto& n : dv.notes) out << "note: " << n << "\n";
        out << "overall: " << to_string(dv.overall) << "\n";
    }
    return dv.proved() ? kExitPositive : kExitInconclusive;
}

int cmd_validate(const Config& c, std::ostream& out) {
    const Input in = load_input(c);
    const auto& agg = require_agg(in, "validate");
    const auto report = validate_assumption1(agg);
    const auto ag = build_aggregation_graph(agg);
    const auto cycle = find_cycle(ag);
    std::optional<std::vector<std::size_t>> order;
    if (!cycle) order = topological_order(ag);
    const bool ok = report.passed() && !cycle;

    if (c.machine()) {
        json blocks = json::array();
        for (const auto& b : report.blocks) {
            blocks.push_back({{"block", b.name},
                              {"has_output", b.has_output},
                              {"outputs_local", b.outputs_local},
                              {"states_reach_output", b.states_reach_output},
                              {"vacuous", b.vacuous},
                              {"nonlocal_outputs", b.nonlocal_outputs},
                              {"stranded_states", b.stranded_states},
                              {"external_inputs", b.external_inputs},
                              {"passed", b.passed()}});
        }
        json edges = json::array();
        for (const auto& e : ag.edges) {
            json crossing = json::array();
            for (const auto& [t, h] : e.crossing) crossing.push_back({t, h});
            edges.push_back({{"from", ag.names[e.from]}, {"to", ag.names[e.to]}, {"crossing", crossing}});
        }
        json j{{"command", "validate"}, {"model", in.label}, {"aggregation", in.agg_label}, {"blocks", blocks},
               {"edges", edges},        {"acyclic", !cycle}};
        j["order"] = order ? json(block_names(agg, *order)) : json(nullptr);
        j["cycle"] = cycle ? json(block_names(agg, *cycle)) : json(nullptr);
        j["passed"] = ok;
        out << j.dump(2) << "\n";
    } else {
        out << report.to_text();
        out << "aggregation graph:\n";
        if (ag.edges.empty()) out << "  (no edges)\n";
        for (const auto& e : ag.edges) {
            std::vector<std::string> via;
            for (const auto& [t, h] : e.crossing) via.push_back(t + "->" + h);
            out << "  " << ag.names[e.from] << " -> " << ag.names[e.to] << "  via " << join(via) << "\n";
        }
        if (cycle) {
            auto names = block_names(agg, *cycle);
            names.push_back(names.front());
            out << "acyclicity: FAIL, cycle " << join(names, " -> ") << "\n";
        } else {
            out << "acyclicity: pass, order " << join(block_names(agg, *order), " ") << "\n";
        }
        out << "result: " << (ok ? "pass" : "fail") << "\n";
    }
    return ok ? kExitPositive : kExitNegative;
}

int cmd_stats(const Config& c, std::ostream& out) {
    const Property prop = property_of(c);
    const Input in = load_input(c);
    const PairKind kind = pair_kind(prop);
    if (!in.agg) {
        const auto s = pair_graph_stats(build_pair_graph(in.bcn, kind, c.cap));
        if (c.machine()) {
            json j{{"command", "stats"}, {"model", in.label}, {"graph", pair_kind_name(prop)}};
            j["stats"] = stats_json(s);
            out << j.dump(2) << "\n";
        } else {
            out << pair_kind_name(prop) << ": " << s.diagonal << " diagonal, " << s.non_diagonal << " non-diagonal, "
                << s.edges << " edges\n";
        }
        return kExitPositive;
    }
    const auto& agg = *in.agg;
    json blocks = json::array();
    for (std::size_t i = 0; i < agg.size(); ++i) {
        const auto& name = agg.blocks()[i].name;
        json jb{{"block", name}};
        std::string line;
        try {
            const auto sub = extract_sub_bcn(agg, i, false);
            if (sub.vacuous()) {
                jb["stats"] = nullptr;
                jb["detail"] = "no state nodes";
                line = "no state nodes";
            } else {
                const auto s = pair_graph_stats(build_pair_graph(*sub.bcn, kind, c.cap));
                jb["stats"] = stats_json(s);
                line = std::to_string(s.diagonal) + " diagonal, " + std::to_string(s.non_diagonal) + " non-diagonal, " +
                       std::to_string(s.edges) + " edges";
            }
        } catch (const AggregationError& e) {
            jb["stats"] = nullptr;
            jb["detail"] = e.what();
            line = std::string("skipped: ") + e.what();
        } catch (const CapExceeded& e) {
            jb["stats"] = nullptr;
            jb["detail"] = e.what();
            line = std::string("skipped: ") + e.what();
        }
        blocks.push_back(jb);
        if (!c.machine()) out << name << " " << pair_kind_name(prop) << ": " << line << "\n";
    }
    if (c.machine()) {
        json j{{"command", "stats"}, {"model", in.label}, {"aggregation", in.agg_label}, {"graph", pair_kind_name(prop)}};
        j["blocks"] = blocks;
        out << j.dump(2) << "\n";
    }
    return kExitPositive;
}

int cmd_cost(const Config& c, std::ostream& out) {
    const Input in = load_input(c);
    const auto est = estimate_cost(require_agg(in, "cost"));
    if (c.machine()) {
        json blocks = json::array();
        for (const auto& b : est.blocks)
            blocks.push_back({{"block", b.name}, {"n", b.n}, {"m", b.m}, {"cost", b.cost.str()}});
        std::ostringstream ideal;
        ideal << std::setprecision(6) << est.idealized;
        json j{{"command", "cost"},
               {"model", in.label},
               {"aggregation", in.agg_label},
               {"k", est.k},
               {"n", est.n},
               {"m", est.m},
               {"blocks", blocks},
               {"direct", est.direct.str()},
               {"aggregated", est.aggregated.str()},
               {"idealized", ideal.str()},
               {"aggregated_below_direct", est.aggregated_below_direct}};
        out << j.dump(2) << "\n";
    } else {
        out << "  block        n   m  cost\n";
        for (const auto& b : est.blocks)
            out << "  " << std::left << std::setw(10) << b.name << std::right << std::setw(4) << b.n << std::setw(4) << b.m
                << "  " << b.cost.str() << "\n";
        out << "aggregated: " << est.aggregated.str() << "\n";
        out << "direct:     " << est.direct.str() << "\n";
        out << "idealized:  " << std::setprecision(6) << est.idealized << "  (k=" << est.k << ", equal blocks)\n";
        out << "aggregated below direct: " << (est.aggregated_below_direct ? "yes" : "no") << "\n";
    }
    return kExitPositive;
}

int cmd_minset(const Config& c, std::ostream& out) {
    const Property prop = property_of(c);
    const Input in = load_input(c);
    const auto& agg = require_agg(in, "minset");
    const std::size_t block = require_block(agg, c.block);
    SearchMode mode;
    if (c.mode == "leave-one-out") mode = SearchMode::leave_one_out;
    else if (c.mode == "exhaustive") mode = SearchMode::exhaustive;
    else throw UsageError("unknown --mode '" + c.mode + "'");
    const auto r = analyze_observation_sets(agg, block, prop, mode, RunOptions{c.cap, c.workers});
    if (c.machine()) {
        json j{{"command", "minset"},
               {"model", in.label},
               {"aggregation", in.agg_label},
               {"block", r.name},
               {"property", to_string(prop)},
               {"mode", c.mode},
               {"candidates", r.candidates},
               {"full_set_passes", r.full_set_passes},
               {"necessary", r.necessary}};
        j["minimal_sets"] = mode == SearchMode::exhaustive ? json(r.minimal_sets) : json(nullptr);
        j["unique"] = r.unique ? json(*r.unique) : json(nullptr);
        j["evaluated"] = r.evaluated;
        out << j.dump(2) << "\n";
    } else {
        out << "block " << r.name << ", " << to_string(prop) << ", candidates: " << join(r.candidates, " ") << "\n";
        out << "all candidates observed: " << (r.full_set_passes ? "pass" : "fail") << "\n";
        out << "necessary: " << (r.necessary.empty() ? "(none)" : join(r.necessary, " ")) << "\n";
        if (mode == SearchMode::exhaustive) {
            if (r.minimal_sets.empty()) out << "no observation set makes this block pass\n";
            for (const auto& s : r.minimal_sets) out << "minimal: {" << join(s) << "}\n";
            if (!r.minimal_sets.empty()) out << "unique: " << (*r.unique ? "yes" : "no") << "\n";
        }
        out << "subsets evaluated: " << r.evaluated << "\n";
    }
    return kExitPositive;
}

int cmd_oracle(const Config& c, std::ostream& out) {
    const Property prop = property_of(c);
    const Input in = load_input(c);
    const auto v = prop == Property::observability ? oracle_observable(in.bcn) : oracle_reconstructible(in.bcn);
    std::string cex;
    if (v.counterexample) {
        std::vector<std::string> us;
        for (const auto& u : v.counterexample->inputs) us.push_back(u.str());
        cex = v.counterexample->x0.str() + "," + v.counterexample->x0b.str() + " : " + join(us, ",");
    }
    if (c.machine()) {
        json j{{"command", "oracle"},
               {"model", in.label},
               {"property", to_string(prop)},
               {"horizon", v.horizon},
               {"verdict", v.positive ? "positive" : "negative"}};
        if (v.counterexample)
            j["counterexample"] = {{"x0", v.counterexample->x0.str()},
                                   {"x0b", v.counterexample->x0b.str()},
                                   {"inputs", inputs_json(v.counterexample->inputs)}};
        else j["counterexample"] = nullptr;
        out << j.dump(2) << "\n";
    } else {
        out << in.label << ": " << (v.positive ? "" : "not ") << adjective(prop) << " (bounded search, horizon "
            << v.horizon << ")\n";
        if (v.counterexample) out << "counterexample: " << cex << "\n";
    }
    return v.positive ? kExitPositive : kExitNegative;
}

int cmd_list(const Config& c, std::ostream& out) {
    const auto models = list_models();
    if (c.machine()) {
        json a = json::array();
        for (const auto& m : models)
            a.push_back({{"name", m.name},
                         {"file", m.bcn_file},
                         {"summary", m.summary},
                         {"aggregations", m.aggregations},
                         {"observation_sets", m.observation_sets}});
        out << json{{"command", "list-models"}, {"models", a}}.dump(2) << "\n";
        return kExitPositive;
    }
    for (const auto& m : models) {
        out << std::left << std::setw(11) << m.name << std::right << m.summary << "\n";
        if (!m.aggregations.empty()) out << "           aggregations: " << join(m.aggregations, " ") << "\n";
        if (!m.observation_sets.empty()) out << "           observation sets: " << join(m.observation_sets, " ") << "\n";
    }
    return kExitPositive;
}

int cmd_dump(const Config& c, std::ostream& out) {
    const Property prop = property_of(c);
    const Input in = load_input(c);
    std::optional<Bcn> target;
    if (!c.block.empty()) {
        const auto& agg = require_agg(in, "dump-graph --block");
        auto sub = extract_sub_bcn(agg, require_block(agg, c.block), false);
        if (sub.vacuous()) throw UsageError("block '" + c.block + "' has no state nodes");
        target = *sub.bcn;
    } else {
        target = in.bcn;
    }
    const auto g = build_pair_graph(*target, pair_kind(prop), c.cap);
    if (!c.machine()) {
        dump_pair_graph(g, out);
        return kExitPositive;
    }
    json vertices = json::array();
    json edges = json::array();
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const auto pv = g.vertex(v);
        vertices.push_back({{"index", v}, {"lo", pv.lo.str()}, {"hi", pv.hi.str()}, {"diagonal", pv.diagonal()}});
        for (auto e = g.edge_begin(v); e < g.edge_end(v); ++e) {
            json us = json::array();
            for (auto u : g.edge_weight(e)) us.push_back(make_input(*target, u).str());
            edges.push_back({{"from", v}, {"to", g.edge_target(e)}, {"inputs", us}});
        }
    }
    json j{{"command", "dump-graph"}, {"model", in.label}, {"graph", pair_kind_name(prop)}};
    if (!c.block.empty()) j["block"] = c.block;
    j["vertices"] = vertices;
    j["edges"] = edges;
    out << j.dump(2) << "\n";
    return kExitPositive;
}

void warn_about_cap(unsigned cap, std::ostream& err) {
    if (cap <= kDefaultStateCap) return;
    // Vertex count of the pair graph at n = cap, eight bytes per vertex and
    // per edge with one input bit.
    const long double vertices = std::ldexp(1.0L, static_cast<int>(cap) - 1) * (std::ldexp(1.0L, static_cast<int>(cap)) + 1);
    const long double gib = vertices * 16.0L / std::ldexp(1.0L, 30);
    err << "warning: --cap " << cap << " admits pair graphs of up to " << std::setprecision(3) << vertices
        << " vertices, roughly " << gib << " GiB before edges multiply with inputs\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Observability and reconstructibility of Boolean control networks", "bcnobs"};
    app.require_subcommand(1, 1);
    Config c;

    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"human", "machine"}));
    app.add_option("--cap", c.cap, "Largest state count verified directly")
        ->check(CLI::Range(1u, kMaxStateCap));
    app.add_option("--workers", c.workers, "Worker threads (default: BCNOBS_WORKERS or all cores)");
    app.fallthrough();

    auto model_cmd = [&](const char* name, const char* help, bool with_prop) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("target", c.targets, with_prop ? "[obs|recon] MODEL" : "MODEL")->required()->expected(1, with_prop ? 2 : 1);
        sub->add_option("--observe", c.observe, "Observation set: bundled name, file, or comma list");
        if (with_prop) sub->add_option("--prop", c.prop, "obs or recon")->check(CLI::IsMember({"obs", "recon"}));
        return sub;
    };

    auto* check = model_cmd("check", "Decide a property, directly or through an aggregation", true);
    check->add_option("--agg", c.agg, "Aggregation: bundled name or file");
    check->add_option("--replay", c.replay, "Replay a witness file instead of deciding");
    check->add_option("--rounds", c.rounds, "Cycle repetitions to simulate for a witness");
    auto* validate = model_cmd("validate", "Check the block conditions and acyclicity of an aggregation", false);
    validate->add_option("--agg", c.agg, "Aggregation: bundled name or file")->required();
    auto* stats = model_cmd("stats", "Pair-graph vertex and edge counts", true);
    stats->add_option("--agg", c.agg, "Report per block of this aggregation");
    auto* cost = model_cmd("cost", "Pair-graph cost of direct and aggregated verification", false);
    cost->add_option("--agg", c.agg, "Aggregation: bundled name or file")->required();
    auto* minset = model_cmd("minset", "Search observation sets that make one block pass", true);
    minset->add_option("--agg", c.agg, "Aggregation: bundled name or file")->required();
    minset->add_option("--block", c.block, "Block name")->required();
    minset->add_option("--mode", c.mode, "leave-one-out or exhaustive")
        ->check(CLI::IsMember({"leave-one-out", "exhaustive"}));
    auto* oracle = model_cmd("oracle", "Bounded search straight from the definitions (small networks)", true);
    auto* list = app.add_subcommand("list-models", "Bundled models");
    auto* dump = model_cmd("dump-graph", "Print the pair graph", true);
    dump->add_option("--agg", c.agg, "Aggregation holding --block");
    dump->add_option("--block", c.block, "Dump the sub-network of this block");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPositive : kExitError;
    }

    try {
        warn_about_cap(c.cap, err);
        if (check->parsed()) return cmd_check(c, out);
        if (validate->parsed()) return cmd_validate(c, out);
        if (stats->parsed()) return cmd_stats(c, out);
        if (cost->parsed()) return cmd_cost(c, out);
        if (minset->parsed()) return cmd_minset(c, out);
        if (oracle->parsed()) return cmd_oracle(c, out);
        if (list->parsed()) return cmd_list(c, out);
        if (dump->parsed()) return cmd_dump(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        if (c.machine()) out << json{{"error", e.what()}}.dump(2) << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace bcnobs
