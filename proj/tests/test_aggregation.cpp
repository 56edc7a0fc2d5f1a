#include <doctest.h>

#include <set>

#include "bcnobs/aggregation.hpp"
#include "bcnobs/models.hpp"
#include "bcnobs/parser.hpp"
#include "support/random_bcn.hpp"

using namespace bcnobs;

namespace {

const char* kChain = R"(
inputs: u
states: a b c
outputs: ya yc
a' = a ^ u
b' = a & b
c' = b | c
ya = a
yc = c
)";

std::vector<std::string> names_of(const AggregationGraph& ag, const std::vector<std::size_t>& ids) {
    std::vector<std::string> out;
    for (auto i : ids) out.push_back(ag.names[i]);
    return out;
}

}  // namespace

TEST_CASE("the three-block example") {
    const auto m = load_model("eq3-fig4");
    const auto& agg = m.aggregation("fig4");
    const auto report = validate_assumption1(agg);
    CHECK(report.passed());
    CHECK(report.blocks[1].external_inputs == std::vector<std::string>{"x2"});
    CHECK(report.blocks[2].external_inputs == std::vector<std::string>{"x3", "x5"});

    const auto ag = build_aggregation_graph(agg);
    CHECK(ag.names == std::vector<std::string>{"N1", "N2", "N3"});
    REQUIRE(ag.edges.size() == 3);
    CHECK(ag.edges[0].from == 0);
    CHECK(ag.edges[0].to == 1);
    CHECK(ag.indegree(2) == 2);
    CHECK(ag.successors(0) == std::vector<std::size_t>{1, 2});
    CHECK(is_acyclic(ag));
    CHECK(is_cascading(agg));
    CHECK(names_of(ag, topological_order(ag)) == std::vector<std::string>{"N1", "N2", "N3"});

    const auto sub = extract_sub_bcn(agg, 1);
    REQUIRE(sub.bcn);
    CHECK(sub.bcn->states() == std::vector<std::string>{"x4", "x5"});
    CHECK(sub.bcn->inputs() == std::vector<std::string>{"u1", "x2"});
    CHECK(sub.bcn->outputs() == std::vector<std::string>{"y2"});
}

TEST_CASE("a cyclic aggregation reports its cycle") {
    const auto m = load_model("eq5-fig6");
    const auto ag = build_aggregation_graph(m.aggregation("fig6"));
    CHECK_FALSE(is_acyclic(ag));
    CHECK_FALSE(is_cascading(m.aggregation("fig6")));
    const auto cycle = find_cycle(ag);
    REQUIRE(cycle);
    CHECK(names_of(ag, *cycle) == std::vector<std::string>{"N1", "N2"});
    try {
        topological_order(ag);
        FAIL("no error");
    } catch (const CycleError& e) {
        CHECK(e.cycle() == *cycle);
    }
}

TEST_CASE("block conditions") {
    const auto b = parse_bcn(kChain);

    SUBCASE("passing chain") {
        const Aggregation agg(b, {{"A", {"a", "u", "ya"}}, {"B", {"b", "c", "yc"}}});
        const auto r = validate_assumption1(agg);
        CHECK(r.passed());
        CHECK(r.blocks[1].external_inputs == std::vector<std::string>{"a"});
        CHECK(r.to_kv().find("block=A check=has-output result=pass") != std::string::npos);
    }
    SUBCASE("block without output") {
        const Aggregation agg(b, {{"A", {"a", "u", "ya", "yc", "c"}}, {"B", {"b"}}});
        const auto r = validate_assumption1(agg);
        CHECK_FALSE(r.passed());
        CHECK_FALSE(r.blocks[1].has_output);
        CHECK(r.to_text().find("(a) FAIL") != std::string::npos);
        CHECK(r.to_kv().find("block=B check=has-output result=fail") != std::string::npos);
        CHECK_THROWS_AS(extract_sub_bcn(agg, 1), AggregationError);
    }
    SUBCASE("output reading a foreign state") {
        const Aggregation agg(b, {{"A", {"a", "u", "yc"}}, {"B", {"b", "c", "ya"}}});
        const auto r = validate_assumption1(agg);
        CHECK_FALSE(r.blocks[0].outputs_local);
        CHECK(r.blocks[0].nonlocal_outputs == std::vector<std::string>{"yc"});
        CHECK_THROWS_AS(extract_sub_bcn(agg, 0, false), AggregationError);
    }
    SUBCASE("state with no path to an output") {
        // b feeds c only, and c sits in another block.
        const Aggregation agg(b, {{"A", {"a", "b", "u", "ya"}}, {"B", {"c", "yc"}}});
        const auto r = validate_assumption1(agg);
        CHECK_FALSE(r.blocks[0].states_reach_output);
        CHECK(r.blocks[0].stranded_states == std::vector<std::string>{"b"});
        CHECK_THROWS_AS(extract_sub_bcn(agg, 0), AggregationError);
        CHECK(extract_sub_bcn(agg, 0, false).bcn);
    }
}

TEST_CASE("blocks without states are vacuous") {
    const auto b = parse_bcn("inputs: u\nstates: a\noutputs: y k\na' = a ^ u\ny = a\nk = 1\n");
    const Aggregation agg(b, {{"A", {"a", "u", "y"}}, {"K", {"k"}}});
    const auto r = validate_assumption1(agg);
    CHECK(r.passed());
    CHECK(r.blocks[1].vacuous);
    const auto sub = extract_sub_bcn(agg, 1);
    CHECK(sub.vacuous());
    CHECK_FALSE(sub.bcn);
}

TEST_CASE("malformed partitions are rejected") {
    const auto b = parse_bcn(kChain);
    CHECK_THROWS_AS(Aggregation(b, {{"A", {"a", "b", "c", "u", "ya", "yc"}}}), AggregationError);
    CHECK_THROWS_AS(Aggregation(b, {{"A", {"a", "u", "ya"}}, {"A", {"b", "c", "yc"}}}), AggregationError);
    CHECK_THROWS_AS(Aggregation(b, {{"A", {"a", "u", "ya"}}, {"B", {"b", "c"}}}), AggregationError);
    CHECK_THROWS_AS(Aggregation(b, {{"A", {"a", "u", "ya", "b"}}, {"B", {"b", "c", "yc"}}}), AggregationError);
    CHECK_THROWS_AS(Aggregation(b, {{"A", {"a", "u", "ya", "zz"}}, {"B", {"b", "c", "yc"}}}), AggregationError);
    CHECK_THROWS_AS(Aggregation(b, {{"A", {"a", "u", "ya"}}, {"B", {"b", "c", "yc"}}, {"C", {}}}), AggregationError);
}

TEST_CASE("observation outputs join their state's block") {
    const auto b = parse_bcn(kChain);
    const Aggregation agg(b, {{"A", {"a", "u", "ya"}}, {"B", {"b", "c", "yc"}}});
    const auto moved = rebind(agg, b.with_observations({"b"}));
    CHECK(moved.outputs_of(1) == std::vector<std::string>{"yc", "obs_b"});
    CHECK(moved.block_of("obs_b") == 1);
    CHECK(validate_assumption1(moved).blocks[1].states_reach_output);
    const auto back = rebind(moved, b);
    CHECK(back.outputs_of(1) == std::vector<std::string>{"yc"});
    CHECK(back.blocks()[1].name == "B");
}

TEST_CASE("tcell aggregations") {
    const auto m = load_model("tcell");
    for (const char* name : {"fig10", "fig17"}) {
        const auto ag = build_aggregation_graph(m.aggregation(name));
        CHECK(is_acyclic(ag));
        CHECK(is_cascading(m.aggregation(name)));
    }
    const auto agg = rebind(m.aggregation("fig10"), m.bcn.with_observations(m.observation_set("obs16")));
    CHECK(validate_assumption1(agg).passed());
}

TEST_CASE("property: cascading agrees with acyclic on random partitions") {
    testing::Rng rng(51);
    int acyclic = 0, cyclic = 0;
    for (int i = 0; i < 400; ++i) {
        const auto b = testing::random_bcn(rng, {2, 6, 0, 2, 1, 3, 2});
        const std::size_t nodes = b.num_states() + b.num_inputs() + b.num_outputs();
        const Aggregation agg(b, testing::random_partition(rng, b, testing::uniform(rng, 2, std::min<std::size_t>(nodes, 5))));
        const bool a = is_acyclic(build_aggregation_graph(agg));
        CHECK(is_cascading(agg) == a);
        (a ? acyclic : cyclic)++;
    }
    CHECK(acyclic > 20);
    CHECK(cyclic > 20);
}

TEST_CASE("property: every prefix of the order has no entering edges") {
    testing::Rng rng(52);
    for (int i = 0; i < 300; ++i) {
        const std::size_t k = testing::uniform(rng, 2, 4);
        const auto layered = testing::random_layered(rng, testing::uniform(rng, k, 7), testing::uniform(rng, 0, 2), k);
        std::vector<Block> blocks = layered.blocks;
        std::shuffle(blocks.begin(), blocks.end(), rng);  // the order must not come from declaration
        const Aggregation agg(layered.bcn, blocks);
        const auto ag = build_aggregation_graph(agg);
        REQUIRE(is_acyclic(ag));
        const auto order = topological_order(ag);
        REQUIRE(order.size() == agg.size());
        std::vector<std::size_t> pos(agg.size());
        for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
        // An edge into the prefix {order[0..k]} from outside it would run backwards.
        for (const auto& e : ag.edges) CHECK(pos[e.from] < pos[e.to]);
        const auto& g = agg.network();
        for (std::size_t k = 0; k < order.size(); ++k) {
            std::set<std::size_t> prefix(order.begin(), order.begin() + k + 1);
            for (auto [t, h] : g.edges)
                if (prefix.count(agg.block_of_node(h))) CHECK(prefix.count(agg.block_of_node(t)));
        }
    }
}

TEST_CASE("property: sub-networks step like the projected parent") {
    testing::Rng rng(53);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const auto b = testing::random_bcn(rng, {2, 6, 0, 2, 1, 3, 2});
        const std::size_t nodes = b.num_states() + b.num_inputs() + b.num_outputs();
        const Aggregation agg(b, testing::random_partition(rng, b, testing::uniform(rng, 2, std::min<std::size_t>(nodes, 4))));
        for (std::size_t blk = 0; blk < agg.size(); ++blk) {
            SubBcn sub;
            try {
                sub = extract_sub_bcn(agg, blk, false);
            } catch (const AggregationError&) {
                continue;
            }
            if (sub.vacuous()) continue;
            const Bcn& s = *sub.bcn;
            ++checked;
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << b.num_states()); ++x)
                for (std::uint64_t u = 0; u < (std::uint64_t{1} << b.num_inputs()); ++u) {
                    auto value = [&](const std::string& name) {
                        if (auto k = b.state_index(name)) return ((x >> *k) & 1u) != 0;
                        return ((u >> *b.input_index(name)) & 1u) != 0;
                    };
                    std::uint64_t sx = 0, su = 0;
                    for (std::size_t k = 0; k < s.num_states(); ++k)
                        if (value(s.states()[k])) sx |= std::uint64_t{1} << k;
                    for (std::size_t k = 0; k < s.num_inputs(); ++k)
                        if (value(s.inputs()[k])) su |= std::uint64_t{1} << k;
                    const auto next = b.step_code(x, u), sub_next = s.step_code(sx, su);
                    for (std::size_t k = 0; k < s.num_states(); ++k)
                        REQUIRE(((sub_next >> k) & 1u) == ((next >> *b.state_index(s.states()[k])) & 1u));
                    const auto y = b.observe_code(x), sy = s.observe_code(sx);
                    for (std::size_t k = 0; k < s.num_outputs(); ++k)
                        REQUIRE(((sy >> k) & 1u) == ((y >> *b.output_index(s.outputs()[k])) & 1u));
                }
        }
    }
    CHECK(checked > 100);
}
