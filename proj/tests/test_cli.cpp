#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcnobs/cli.hpp"
#include "bcnobs/models.hpp"
#include "bcnobs/oracle.hpp"

using namespace bcnobs;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "bcnobs");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Run machine(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "machine"});
    return run(std::move(args));
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run({"check", "obs", "eq2"}).code == kExitPositive);
    CHECK(run({"check", "obs", "eq1"}).code == kExitNegative);
    CHECK(run({"check", "recon", "eq1"}).code == kExitPositive);
    CHECK(run({"check", "recon", "recon-eq2"}).code == kExitNegative);
    CHECK(run({"check", "obs", "tcell", "--agg", "fig10", "--observe", "obs16"}).code == kExitPositive);
    CHECK(run({"check", "recon", "tcell", "--agg", "fig17", "--observe", "recon10"}).code == kExitPositive);
    CHECK(run({"check", "obs", "eq4-fig5", "--agg", "fig5"}).code == kExitInconclusive);
    CHECK(run({"validate", "eq3-fig4", "--agg", "fig4"}).code == 0);
    CHECK(run({"validate", "eq5-fig6", "--agg", "fig6"}).code == 1);

    CHECK(run({"check", "obs", "no-such-model"}).code == kExitError);
    CHECK(run({"check", "obs", "eq1", "--agg", "nope"}).code == kExitError);
    CHECK(run({"check", "maybe", "eq1"}).code == kExitError);
    CHECK(run({"--cap", "40", "check", "obs", "eq1"}).code == kExitError);
    CHECK(run({"check", "obs", "tcell"}).code == kExitError);
    CHECK(run({"frobnicate"}).code == kExitError);
    CHECK(run({"oracle", "obs", "eq3-fig4"}).code == kExitError);
    CHECK(run({"--help"}).code == 0);

    const auto e = machine({"check", "obs", "no-such-model"});
    CHECK(json::parse(e.out).contains("error"));
}

TEST_CASE("human output") {
    auto r = run({"check", "obs", "eq1"});
    CHECK(contains(r.out, "not observable"));
    CHECK(contains(r.out, "00,01 : 0 | 0"));

    r = run({"validate", "eq5-fig6", "--agg", "fig6"});
    CHECK(contains(r.out, "cycle N1 -> N2 -> N1"));

    r = run({"stats", "obs", "eq3-fig4"});
    CHECK(contains(r.out, "OWPG: 256 diagonal, 4992 non-diagonal"));

    r = run({"cost", "eq3-fig4", "--agg", "fig4"});
    CHECK(contains(r.out, "aggregated: 192"));
    CHECK(contains(r.out, "direct:     65536"));

    r = run({"minset", "obs", "tcell", "--agg", "fig10", "--block", "N2", "--mode", "exhaustive"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "minimal: {Grb2Sos, Itk, PLCgbind, SLP76}"));
    CHECK(contains(r.out, "unique: yes"));

    r = run({"list-models"});
    for (const auto& m : list_models()) CHECK(contains(r.out, m.name));

    r = run({"check", "obs", "tcell", "--agg", "fig10", "--observe", "obs16"});
    CHECK(contains(r.out, "overall: PROVED"));

    r = run({"--cap", "16", "check", "obs", "eq1"});
    CHECK(contains(r.err, "GiB"));
}

TEST_CASE("models from files and ad hoc observations") {
    const std::string dir = BCNOBS_MODEL_DIR;
    CHECK(run({"check", "obs", dir + "/eq2.bcn"}).code == kExitPositive);
    CHECK(run({"check", "obs", dir + "/eq3.bcn", "--agg", dir + "/eq3-fig4.agg"}).code == kExitPositive);
    CHECK(run({"check", "obs", "eq3.bcn", "--agg", "eq3-fig4.agg"}).code == kExitPositive);
    // observing both states makes eq1 observable
    CHECK(run({"check", "obs", "eq1", "--observe", "A,B"}).code == kExitPositive);
    const auto set = temp_file("bcnobs_test_obs.set", "# states\nA\nB\n");
    CHECK(run({"check", "obs", "eq1", "--observe", set.string()}).code == kExitPositive);
    std::filesystem::remove(set);
}

TEST_CASE("witness replay") {
    const auto w = temp_file("bcnobs_test_witness.txt", "# from check\n00,01 : 0 | 0\n");
    auto r = run({"check", "obs", "eq1", "--replay", w.string()});
    CHECK(r.code == kExitNegative);
    CHECK(contains(r.out, "confirmed"));

    // eq2 is observable, so no claimed witness survives replay
    r = run({"check", "obs", "eq2", "--replay", w.string()});
    CHECK(r.code == kExitInconclusive);
    std::filesystem::remove(w);

    const auto bad = temp_file("bcnobs_test_bad.txt", "00,00 : | 0\n");
    CHECK(run({"check", "obs", "eq1", "--replay", bad.string()}).code == kExitError);
    std::filesystem::remove(bad);
    CHECK(run({"check", "obs", "eq1", "--replay", "/nonexistent/w.txt"}).code == kExitError);

    r = machine({"check", "obs", "eq1", "--rounds", "3"});
    const auto j = json::parse(r.out);
    CHECK(j["trace"]["steps"].size() == 1 + 1 + 3);
    CHECK(j["trace"]["output_divergence"].is_null());
}

TEST_CASE("machine output parses for every command on every model") {
    for (const auto& info : list_models()) {
        CAPTURE(info.name);
        const auto m = load_model(info.name);
        std::vector<std::string> observe;
        if (!info.observation_sets.empty()) observe = {"--observe", info.observation_sets.front()};
        auto with_obs = [&](std::vector<std::string> args) {
            args.insert(args.end(), observe.begin(), observe.end());
            return args;
        };
        std::vector<std::vector<std::string>> commands;
        for (const char* p : {"obs", "recon"}) {
            if (m.bcn.num_states() <= 20) {
                commands.push_back(with_obs({"check", p, info.name}));
                if (m.bcn.num_states() <= 12) commands.push_back(with_obs({"stats", p, info.name}));
            }
            if (m.bcn.num_states() <= kOracleMaxStates && m.bcn.num_inputs() <= kOracleMaxInputs)
                commands.push_back({"oracle", p, info.name});
            if (m.bcn.num_states() <= 4) commands.push_back({"dump-graph", p, info.name});
        }
        for (const auto& agg : info.aggregations) {
            commands.push_back({"validate", info.name, "--agg", agg});
            commands.push_back({"cost", info.name, "--agg", agg});
            commands.push_back(with_obs({"check", "obs", info.name, "--agg", agg}));
            commands.push_back(with_obs({"check", "recon", info.name, "--agg", agg}));
            commands.push_back(with_obs({"stats", "obs", info.name, "--agg", agg}));
            const auto& first = m.aggregation(agg).blocks().front().name;
            commands.push_back({"minset", "obs", info.name, "--agg", agg, "--block", first});
        }
        for (const auto& args : commands) {
            std::string line;
            for (const auto& a : args) line += a + " ";
            CAPTURE(line);
            const auto r = machine(args);
            CHECK(r.code != kExitError);
            json j;
            CHECK_NOTHROW(j = json::parse(r.out));
            CHECK(j.is_object());
            CHECK(machine(args).out == r.out);
        }
    }
}

TEST_CASE("machine fields") {
    auto j = json::parse(machine({"check", "obs", "eq1"}).out);
    CHECK(j["verdict"] == "negative");
    CHECK(j["witness"]["text"] == "00,01 : 0 | 0");

    j = json::parse(machine({"check", "obs", "tcell", "--agg", "fig10", "--observe", "obs16"}).out);
    CHECK(j["overall"] == "PROVED");
    CHECK(j["blocks"].size() == 5);

    j = json::parse(machine({"cost", "tcell", "--agg", "fig10"}).out);
    CHECK(j["direct"] == "75557863725914323419136");
}
