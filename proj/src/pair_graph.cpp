#include "bcnobs/pair_graph.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <deque>
#include <limits>
#include <sstream>
#include <utility>

namespace bcnobs {

const char* to_string(PairKind kind) { return kind == PairKind::owpg ? "OWPG" : "RWPG"; }

std::string direct_cost_text(std::size_t n, std::size_t m) {
    if (2 * n + m == 0) return "0";
    boost::multiprecision::cpp_int c = 1;
    c <<= static_cast<unsigned>(2 * n + m - 1);
    return c.str();
}

PairVertex PairGraph::vertex(std::size_t v) const {
    return {StateVec(lo_[v], n_), StateVec(hi_[v], n_)};
}

namespace {

std::uint64_t tri(std::uint64_t j, bool with_diagonal) { return with_diagonal ? j * (j + 1) / 2 : j * (j - 1) / 2; }

// Bit-reversed key: ordering by it is lexicographic order of the printed strings.
std::uint32_t lex_key(std::uint32_t code, unsigned m) {
    std::uint32_t r = 0;
    for (unsigned i = 0; i < m; ++i)
        if ((code >> i) & 1u) r |= 1u << (m - 1 - i);
    return r;
}

}  // namespace

std::optional<std::size_t> PairGraph::find(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t states = std::uint64_t{1} << n_;
    if (a >= states || b >= states) return std::nullopt;
    if (out_of_state_[a] != out_of_state_[b]) return std::nullopt;
    const bool diag = kind_ == PairKind::owpg;
    if (a == b && !diag) return std::nullopt;
    std::uint64_t i = pos_in_bucket_[a], j = pos_in_bucket_[b];
    if (i > j) std::swap(i, j);
    return bucket_vertex_base_[bucket_of_state_[a]] + tri(j, diag) + i;
}

PairGraph build_pair_graph(const Bcn& bcn, PairKind kind, unsigned cap) {
    const std::size_t n = bcn.num_states(), m = bcn.num_inputs();
    if (cap > kMaxStateCap)
        throw CapExceeded("state cap " + std::to_string(cap) + " exceeds the hard limit of " +
                          std::to_string(kMaxStateCap));
    if (n > cap)
        throw CapExceeded("n = " + std::to_string(n) + " exceeds the direct-verification cap of " +
                          std::to_string(cap) + " (estimated cost 2^(2n+m-1) = " + direct_cost_text(n, m) +
                          "); use an aggregation");
    if (m > kMaxPairInputs) throw CapExceeded("more than " + std::to_string(kMaxPairInputs) + " input nodes");

    PairGraph g;
    g.kind_ = kind;
    g.n_ = static_cast<unsigned>(n);
    g.m_ = static_cast<unsigned>(m);
    const bool diag = kind == PairKind::owpg;
    const std::uint64_t N = std::uint64_t{1} << n, M = std::uint64_t{1} << m;

    g.out_of_state_.resize(N);
    for (std::uint64_t x = 0; x < N; ++x) g.out_of_state_[x] = bcn.observe_code(x);

    std::vector<std::uint32_t> order(N);
    for (std::uint64_t x = 0; x < N; ++x) order[x] = static_cast<std::uint32_t>(x);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return g.out_of_state_[a] < g.out_of_state_[b]; });

    g.pos_in_bucket_.resize(N);
    g.bucket_of_state_.resize(N);
    std::vector<std::pair<std::size_t, std::size_t>> buckets;  // [begin, end) in order
    for (std::size_t i = 0; i < N;) {
        std::size_t j = i;
        while (j < N && g.out_of_state_[order[j]] == g.out_of_state_[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            g.pos_in_bucket_[order[k]] = static_cast<std::uint32_t>(k - i);
            g.bucket_of_state_[order[k]] = static_cast<std::uint32_t>(buckets.size());
        }
        buckets.emplace_back(i, j);
        i = j;
    }

    std::uint64_t total = 0;
    for (auto [b, e] : buckets) {
        g.bucket_vertex_base_.push_back(total);
        const std::uint64_t size = e - b;
        total += diag ? size * (size + 1) / 2 : size * (size - 1) / 2;
    }
    if (total >= std::numeric_limits<std::uint32_t>::max())
        throw CapExceeded("pair graph would have " + std::to_string(total) + " vertices");

    g.lo_.reserve(total);
    g.hi_.reserve(total);
    for (auto [b, e] : buckets) {
        for (std::size_t j = 0; j < e - b; ++j) {
            const std::size_t upto = diag ? j + 1 : j;
            for (std::size_t i = 0; i < upto; ++i) {
                g.lo_.push_back(order[b + i]);
                g.hi_.push_back(order[b + j]);
            }
        }
    }

    // Successor table when it fits comfortably; otherwise step on demand.
    const bool tabulate = n + m <= 26;
    std::vector<std::uint32_t> next;
    if (tabulate) {
        next.resize(N * M);
        for (std::uint64_t x = 0; x < N; ++x)
            for (std::uint64_t u = 0; u < M; ++u) next[x * M + u] = static_cast<std::uint32_t>(bcn.step_code(x, u));
    }
    auto succ = [&](std::uint64_t x, std::uint64_t u) -> std::uint64_t {
        return tabulate ? next[x * M + u] : bcn.step_code(x, u);
    };

    g.row_.reserve(total + 1);
    g.row_.push_back(0);
    g.wrow_.push_back(0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> local;  // (dst, u)
    for (std::uint64_t v = 0; v < total; ++v) {
        local.clear();
        for (std::uint64_t u = 0; u < M; ++u) {
            const auto w = g.find(succ(g.lo_[v], u), succ(g.hi_[v], u));
            if (w) local.emplace_back(static_cast<std::uint32_t>(*w), static_cast<std::uint32_t>(u));
        }
        std::sort(local.begin(), local.end());
        for (std::size_t k = 0; k < local.size(); ++k) {
            if (k == 0 || local[k].first != local[k - 1].first) {
                if (k != 0) g.wrow_.push_back(g.inputs_.size());
                g.dst_.push_back(local[k].first);
            }
            g.inputs_.push_back(local[k].second);
        }
        if (!local.empty()) g.wrow_.push_back(g.inputs_.size());
        g.row_.push_back(g.dst_.size());
    }
    return g;
}

SccInfo analyze_scc(const PairGraph& g) {
    const std::size_t V = g.num_vertices();
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    SccInfo info;
    info.comp.assign(V, none);
    std::vector<std::uint32_t> index(V, none), low(V, 0);
    std::vector<bool> on_stack(V, false);
    std::vector<std::uint32_t> stack;
    struct Frame {
        std::uint32_t v;
        std::size_t e;
    };
    std::vector<Frame> call;
    std::uint32_t counter = 0, comps = 0;

    for (std::size_t root = 0; root < V; ++root) {
        if (index[root] != none) continue;
        call.push_back({static_cast<std::uint32_t>(root), g.edge_begin(root)});
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<std::uint32_t>(root));
        on_stack[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.e < g.edge_end(f.v)) {
                const auto w = g.edge_target(f.e++);
                if (index[w] == none) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, g.edge_begin(w)});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const auto v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    info.comp[w] = comps;
                } while (w != v);
                ++comps;
            }
        }
    }

    // Group vertices by component (counting sort) and propagate in id order:
    // every successor component has a smaller id.
    std::vector<std::size_t> start(comps + 1, 0);
    for (std::size_t v = 0; v < V; ++v) ++start[info.comp[v] + 1];
    for (std::size_t c = 0; c < comps; ++c) start[c + 1] += start[c];
    std::vector<std::uint32_t> members(V);
    {
        auto fill = start;
        for (std::size_t v = 0; v < V; ++v) members[fill[info.comp[v]]++] = static_cast<std::uint32_t>(v);
    }
    info.cyclic.assign(comps, false);
    info.reaches_cycle.assign(comps, false);
    info.reaches_diagonal.assign(comps, false);
    for (std::size_t c = 0; c < comps; ++c) {
        bool cyclic = start[c + 1] - start[c] >= 2;
        bool rc = false, rd = false;
        for (std::size_t k = start[c]; k < start[c + 1]; ++k) {
            const auto v = members[k];
            if (g.is_diagonal(v)) rd = true;
            for (auto e = g.edge_begin(v); e < g.edge_end(v); ++e) {
                const auto w = g.edge_target(e);
                if (w == v) cyclic = true;
                const auto cw = info.comp[w];
                if (cw != c) {
                    rc = rc || info.reaches_cycle[cw];
                    rd = rd || info.reaches_diagonal[cw];
                }
            }
        }
        info.cyclic[c] = cyclic;
        info.reaches_cycle[c] = cyclic || rc;
        info.reaches_diagonal[c] = rd;
    }
    return info;
}

namespace {

InputVec smallest_input(const PairGraph& g, std::size_t e) {
    const auto w = g.edge_weight(e);
    const auto best = *std::min_element(w.begin(), w.end(), [&](std::uint32_t a, std::uint32_t b) {
        return lex_key(a, g.num_inputs()) < lex_key(b, g.num_inputs());
    });
    return InputVec(best, g.num_inputs());
}

// Shortest path from `from` to the first vertex satisfying `goal`; appends the
// inputs to `out` and returns the vertex reached.
template <class Goal>
std::optional<std::size_t> bfs(const PairGraph& g, std::size_t from, Goal goal, std::vector<InputVec>& out) {
    if (goal(from)) return from;
    constexpr std::uint64_t unseen = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> via(g.num_vertices(), unseen);  // edge index used to enter
    via[from] = unseen - 1;
    std::deque<std::size_t> queue{from};
    std::vector<std::size_t> parent(g.num_vertices(), 0);
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto e = g.edge_begin(v); e < g.edge_end(v); ++e) {
            const auto w = g.edge_target(e);
            if (via[w] != unseen) continue;
            via[w] = e;
            parent[w] = v;
            if (goal(w)) {
                std::vector<InputVec> path;
                for (std::size_t x = w; x != from; x = parent[x]) path.push_back(smallest_input(g, via[x]));
                out.insert(out.end(), path.rbegin(), path.rend());
                return w;
            }
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

// Shortest cycle through `v` inside its component.
std::vector<InputVec> shortest_cycle(const PairGraph& g, const SccInfo& info, std::size_t v) {
    for (auto e = g.edge_begin(v); e < g.edge_end(v); ++e)
        if (g.edge_target(e) == v) return {smallest_input(g, e)};
    constexpr std::uint64_t unseen = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> via(g.num_vertices(), unseen);
    std::vector<std::size_t> parent(g.num_vertices(), 0);
    std::deque<std::size_t> queue{v};
    via[v] = unseen - 1;
    const auto c = info.comp[v];
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        for (auto e = g.edge_begin(x); e < g.edge_end(x); ++e) {
            const auto w = g.edge_target(e);
            if (info.comp[w] != c) continue;
            if (w == v) {
                std::vector<InputVec> path{smallest_input(g, e)};
                for (std::size_t y = x; y != v; y = parent[y]) path.push_back(smallest_input(g, via[y]));
                return {path.rbegin(), path.rend()};
            }
            if (via[w] != unseen) continue;
            via[w] = e;
            parent[w] = x;
            queue.push_back(w);
        }
    }
    return {};
}

std::optional<LassoWitness> lasso_with(const PairGraph& g, const SccInfo& info, std::size_t start, bool via_diagonal) {
    LassoWitness w;
    w.kind = g.kind();
    w.start = g.vertex(start);
    std::size_t cur = start;
    if (via_diagonal) {
        auto d = bfs(g, cur, [&](std::size_t v) { return g.is_diagonal(v); }, w.prefix);
        if (!d) return std::nullopt;
        cur = *d;
    }
    auto c = bfs(g, cur, [&](std::size_t v) { return static_cast<bool>(info.cyclic[info.comp[v]]); }, w.prefix);
    if (!c) return std::nullopt;
    w.cycle = shortest_cycle(g, info, *c);
    if (w.cycle.empty()) return std::nullopt;
    return w;
}

// Candidate with the smallest (hi, lo) codes.
template <class Pred>
std::optional<std::size_t> first_vertex(const PairGraph& g, Pred pred) {
    std::optional<std::size_t> best;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        if (!pred(v)) continue;
        if (!best || std::pair(g.hi_code(v), g.lo_code(v)) < std::pair(g.hi_code(*best), g.lo_code(*best))) best = v;
    }
    return best;
}

void require(const PairGraph& g, PairKind kind) {
    if (g.kind() != kind) throw std::invalid_argument(std::string("expected an ") + to_string(kind));
}

}  // namespace

std::optional<LassoWitness> lasso_from(const PairGraph& g, std::size_t start, bool via_diagonal) {
    if (start >= g.num_vertices()) throw std::out_of_range("vertex index out of range");
    return lasso_with(g, analyze_scc(g), start, via_diagonal);
}

Verdict is_observable(const PairGraph& owpg) {
    require(owpg, PairKind::owpg);
    const auto info = analyze_scc(owpg);
    Verdict verdict{PairKind::owpg, true, std::nullopt};
    auto v = first_vertex(owpg, [&](std::size_t v) {
        return !owpg.is_diagonal(v) && info.reaches_cycle[info.comp[v]];
    });
    if (v) {
        verdict.positive = false;
        verdict.witness = lasso_with(owpg, info, *v, false);
    }
    return verdict;
}

Verdict is_observable(const Bcn& bcn, unsigned cap) { return is_observable(build_pair_graph(bcn, PairKind::owpg, cap)); }

std::optional<LassoWitness> quick_unobservable_check(const PairGraph& owpg) {
    require(owpg, PairKind::owpg);
    const auto info = analyze_scc(owpg);
    auto v = first_vertex(owpg, [&](std::size_t v) {
        return !owpg.is_diagonal(v) && info.reaches_diagonal[info.comp[v]];
    });
    if (!v) return std::nullopt;
    return lasso_with(owpg, info, *v, true);
}

std::optional<LassoWitness> quick_unobservable_check(const Bcn& bcn, unsigned cap) {
    return quick_unobservable_check(build_pair_graph(bcn, PairKind::owpg, cap));
}

Verdict is_reconstructible(const PairGraph& rwpg) {
    require(rwpg, PairKind::rwpg);
    const auto info = analyze_scc(rwpg);
    Verdict verdict{PairKind::rwpg, true, std::nullopt};
    auto v = first_vertex(rwpg, [&](std::size_t v) { return static_cast<bool>(info.cyclic[info.comp[v]]); });
    if (v) {
        verdict.positive = false;
        verdict.witness = lasso_with(rwpg, info, *v, false);
    }
    return verdict;
}

Verdict is_reconstructible(const Bcn& bcn, unsigned cap) {
    return is_reconstructible(build_pair_graph(bcn, PairKind::rwpg, cap));
}

std::string LassoWitness::to_string() const {
    auto list = [](const std::vector<InputVec>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ',';
            s += xs[i].str();
        }
        return s;
    };
    std::string out = start.str() + " : " + list(prefix);
    if (!prefix.empty()) out += ' ';
    return out + "| " + list(cycle);
}

LassoWitness parse_witness(const std::string& text, const Bcn& bcn, PairKind kind) {
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    };
    auto split = [&](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(trim(item));
        return out;
    };
    const auto colon = text.find(':');
    const auto bar = text.find('|');
    if (colon == std::string::npos || bar == std::string::npos || bar < colon)
        throw std::invalid_argument("witness must look like 'lo,hi : prefix | cycle'");

    const auto pair = split(trim(text.substr(0, colon)));
    if (pair.size() != 2) throw std::invalid_argument("witness start must be two states");
    auto state = [&](const std::string& s) {
        auto x = StateVec::from_string(s);
        if (x.width() != bcn.num_states()) throw std::invalid_argument("state '" + s + "' has the wrong width");
        return x;
    };
    auto inputs = [&](const std::string& s) {
        std::vector<InputVec> out;
        if (trim(s).empty()) return out;
        for (const auto& tok : split(s)) {
            if (tok == "-" && bcn.num_inputs() == 0) {
                out.emplace_back(0, 0);
                continue;
            }
            auto u = InputVec::from_string(tok);
            if (u.width() != bcn.num_inputs()) throw std::invalid_argument("input '" + tok + "' has the wrong width");
            out.push_back(u);
        }
        return out;
    };

    LassoWitness w;
    w.kind = kind;
    auto a = state(pair[0]), b = state(pair[1]);
    if (a == b) throw std::invalid_argument("witness start must be two different states");
    if (b.code() < a.code()) std::swap(a, b);
    w.start = {a, b};
    w.prefix = inputs(text.substr(colon + 1, bar - colon - 1));
    w.cycle = inputs(text.substr(bar + 1));
    if (w.cycle.empty()) throw std::invalid_argument("witness cycle is empty");
    return w;
}

ReplayTrace replay_witness(const Bcn& bcn, const LassoWitness& w, std::size_t rounds) {
    if (w.cycle.empty()) throw std::invalid_argument("malformed witness: empty cycle");
    ReplayTrace trace;
    StateVec x = w.start.lo, x2 = w.start.hi;
    auto record = [&] {
        const auto y = bcn.observe(x), y2 = bcn.observe(x2);
        const std::size_t t = trace.steps.size();
        if (!trace.output_divergence && y != y2) trace.output_divergence = t;
        if (!trace.states_merged && x == x2) trace.states_merged = t;
        trace.steps.push_back({x, x2, y, y2});
    };
    auto advance = [&](const InputVec& u) {
        x = bcn.step(x, u);
        x2 = bcn.step(x2, u);
        record();
    };
    record();
    for (const auto& u : w.prefix) advance(u);
    for (std::size_t r = 0; r < rounds; ++r)
        for (const auto& u : w.cycle) advance(u);
    return trace;
}

PairGraphStats pair_graph_stats(const PairGraph& g) {
    PairGraphStats s;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) (g.is_diagonal(v) ? s.diagonal : s.non_diagonal)++;
    s.edges = g.num_edges();
    return s;
}

void dump_pair_graph(const PairGraph& g, std::ostream& os) {
    os << "# " << to_string(g.kind()) << " n=" << g.num_states() << " m=" << g.num_inputs() << '\n';
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        os << v << ": " << g.vertex(v).str();
        if (g.is_diagonal(v)) os << " [diag]";
        os << '\n';
    }
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        for (auto e = g.edge_begin(v); e < g.edge_end(v); ++e) {
            os << v << " -> " << g.edge_target(e) << " : {";
            const auto w = g.edge_weight(e);
            for (std::size_t k = 0; k < w.size(); ++k) {
                if (k) os << ',';
                os << InputVec(w[k], g.num_inputs()).str();
            }
            os << "}\n";
        }
    }
}

}  // namespace bcnobs
