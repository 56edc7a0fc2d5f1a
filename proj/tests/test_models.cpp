#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "bcnobs/models.hpp"
#include "bcnobs/parser.hpp"
#include "support/expectations.hpp"

using namespace bcnobs;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in, "cannot open " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("every bundled model loads") {
    const auto models = list_models();
    CHECK(models.size() == 12);
    for (const auto& info : models) {
        CAPTURE(info.name);
        const auto m = load_model(info.name);
        CHECK(m.name == info.name);
        CHECK(m.aggregations.size() == info.aggregations.size());
        CHECK(m.observation_sets.size() == info.observation_sets.size());
        CHECK_FALSE(m.expectations.empty());
    }
    CHECK_THROWS_AS(load_model("no-such-model"), UnknownModel);
    CHECK_FALSE(has_model("no-such-model"));
}

TEST_CASE("catalog names required by the command line") {
    for (const char* name : {"eq1", "eq2", "eq3-fig4", "eq4-fig5", "eq5-fig6", "eq6-fig7", "recon-eq1", "recon-eq2",
                             "recon-ex6", "recon-ex7", "recon-ex8", "tcell"})
        CHECK_MESSAGE(has_model(name), name);
}

TEST_CASE("embedded files match the data directory") {
    for (const auto& info : list_models()) {
        CHECK(bundled_file(info.bcn_file) == slurp(std::string(BCNOBS_MODEL_DIR) + "/" + info.bcn_file));
    }
    CHECK(bundled_file("tcell-fig10.agg") == slurp(std::string(BCNOBS_MODEL_DIR) + "/tcell-fig10.agg"));
    CHECK_THROWS_AS(bundled_file("missing.bcn"), UnknownModel);
}

TEST_CASE("bundled expectations hold") {
    for (const auto& info : list_models()) {
        const auto m = load_model(info.name);
        for (const auto& e : m.expectations) {
            INFO(info.name << " " << e.key() << " [" << std::string(to_string(e.provenance)) << "]");
            CHECK(testing::evaluate(m, e) == e.value);
        }
    }
}

TEST_CASE("expectation keys are unique per model") {
    for (const auto& info : list_models()) {
        std::set<std::string> keys;
        for (const auto& e : load_model(info.name).expectations) CHECK_MESSAGE(keys.insert(e.key()).second, e.key());
    }
}

TEST_CASE("small examples have the declared shapes") {
    CHECK(load_model("eq1").bcn.num_states() == 2);
    CHECK(load_model("eq1").bcn.num_inputs() == 1);
    const auto eq3 = load_model("eq3-fig4");
    CHECK(eq3.bcn.num_states() == 8);
    CHECK(eq3.bcn.num_inputs() == 1);
    CHECK(eq3.aggregation("fig4").size() == 3);
    CHECK_THROWS_AS(eq3.aggregation("fig99"), UnknownModel);
}

TEST_CASE("tcell model") {
    const auto m = load_model("tcell");
    CHECK(m.bcn.num_states() == 37);
    CHECK(m.bcn.inputs() == std::vector<std::string>{"CD8", "CD45", "TCRlig"});
    CHECK(m.bcn.num_outputs() == 0);
    CHECK(m.bcn.state_index("PLCgact"));
    CHECK(m.bcn.state_index("PLCgbind"));
    CHECK(m.aggregation("fig10").size() == 5);
    CHECK(m.aggregation("fig17").size() == 6);

    const auto& obs16 = m.observation_set("obs16");
    CHECK(obs16.size() == 16);
    CHECK(m.bcn.with_observations(obs16).num_outputs() == 16);
    const auto& recon10 = m.observation_set("recon10");
    CHECK(recon10.size() == 10);
    CHECK(m.bcn.with_observations(recon10).num_outputs() == 10);
    CHECK(std::count(recon10.begin(), recon10.end(), "PKCth") == 1);
}

TEST_CASE("tcell dependency graph matches the published drawing") {
    const auto m = load_model("tcell");
    std::set<std::pair<std::string, std::string>> expected;
    std::istringstream in(slurp(std::string(BCNOBS_TEST_DATA) + "/tcell_fig10_edges.txt"));
    for (std::string tail, head; in >> tail >> head;) expected.emplace(tail, head);
    REQUIRE(expected.size() == 55);

    std::set<std::pair<std::string, std::string>> derived;
    for (const auto& e : derive_network_graph(m.bcn).named_edges()) derived.insert(e);
    for (const auto& e : expected) CHECK_MESSAGE(derived.count(e), "missing " << e.first << " -> " << e.second);
    for (const auto& e : derived) CHECK_MESSAGE(expected.count(e), "extra " << e.first << " -> " << e.second);
}

TEST_CASE("tcell serializes and reparses") {
    const auto m = load_model("tcell");
    ParseOptions opts;
    opts.allow_no_outputs = true;
    CHECK(parse_bcn(serialize_bcn(m.bcn), opts) == m.bcn);
}
