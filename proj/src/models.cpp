#include "bcnobs/models.hpp"

#include <algorithm>
#include <sstream>

#include "bcnobs/parser.hpp"
#include "embedded.hpp"

namespace bcnobs {

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::published: return "published";
    case Provenance::derived: return "derived";
    case Provenance::trivial: return "trivial";
    }
    return "?";
}

std::string Expectation::key() const {
    std::string k = check;
    if (!property.empty()) k += ":" + property;
    if (!aggregation.empty()) k += "@" + aggregation;
    if (!observe.empty()) k += "+" + observe;
    if (!block.empty()) k += "/" + block;
    if (!start.empty()) k += "[" + start + "]";
    return k;
}

namespace {

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::string bcn_file;
    std::vector<std::pair<std::string, std::string>> aggregations;      // name, file
    std::vector<std::pair<std::string, std::string>> observation_sets;  // name, file
    bool allow_no_outputs = false;
    std::vector<Expectation> expectations;
};

constexpr auto P = Provenance::published;
constexpr auto D = Provenance::derived;
constexpr auto T = Provenance::trivial;

Expectation verdict(const char* prop, const char* value, Provenance p) {
    return {"verdict", prop, "", "", "", "", value, p};
}
Expectation on_agg(const char* check, const char* prop, const char* agg, const char* value, Provenance p,
                   const char* block = "", const char* observe = "") {
    return {check, prop, agg, observe, block, "", value, p};
}
Expectation lasso(const char* prop, const char* start, const char* value, Provenance p) {
    return {"lasso", prop, "", "", "", start, value, p};
}
Expectation block_lasso(const char* prop, const char* agg, const char* block, const char* start, const char* value,
                        Provenance p) {
    return {"lasso", prop, agg, "", block, start, value, p};
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> c;
        c.push_back({"eq1", "two states, one input; not observable", "eq1.bcn", {}, {}, false,
                     {
                         verdict("obs", "negative", P),
                         lasso("obs", "00,01", "00,01 : 0 | 0", P),
                         verdict("recon", "positive", D),
                     }});
        c.push_back({"eq2", "two states, one input; observable", "eq2.bcn", {}, {}, false,
                     {
                         verdict("obs", "positive", P),
                         verdict("recon", "positive", D),
                     }});
        c.push_back({"eq3-fig4", "eight states with a three-block acyclic aggregation", "eq3.bcn",
                     {{"fig4", "eq3-fig4.agg"}}, {}, false,
                     {
                         {"owpg", "", "", "", "", "", "256/4992", P},
                         verdict("obs", "positive", P),
                         on_agg("owpg", "", "fig4", "8/16", P, "N1"),
                         on_agg("acyclic", "", "fig4", "true", P),
                         on_agg("admissible", "obs", "fig4", "true", P),
                         on_agg("order", "", "fig4", "N1,N2,N3", P),
                         on_agg("decomposed", "obs", "fig4", "PROVED", P),
                         on_agg("block", "obs", "fig4", "positive", P, "N1"),
                         on_agg("block", "obs", "fig4", "positive", P, "N2"),
                         on_agg("block", "obs", "fig4", "positive", P, "N3"),
                         on_agg("cost", "", "fig4", "192/65536", D),
                     }});
        c.push_back({"eq4-fig5", "observable, with a non-observable block", "eq4.bcn", {{"fig5", "eq4-fig5.agg"}}, {},
                     false,
                     {
                         verdict("obs", "positive", P),
                         on_agg("acyclic", "", "fig5", "false", P),
                         on_agg("admissible", "obs", "fig5", "true", P),
                         on_agg("decomposed", "obs", "fig5", "INCONCLUSIVE", P),
                         on_agg("block", "obs", "fig5", "positive", P, "N1"),
                         on_agg("block", "obs", "fig5", "negative", P, "N2"),
                         on_agg("block", "obs", "fig5", "positive", P, "N3"),
                         block_lasso("obs", "fig5", "N2", "00,01", "00,01 : 000 | 000", P),
                     }});
        c.push_back({"eq5-fig6", "not observable, with observable blocks in a cycle", "eq5.bcn",
                     {{"fig6", "eq5-fig6.agg"}}, {}, false,
                     {
                         verdict("obs", "negative", P),
                         lasso("obs", "0110,1111", "0110,1111 : 00 | 00", P),
                         on_agg("acyclic", "", "fig6", "false", P),
                         on_agg("cycle", "", "fig6", "N1,N2", P),
                         on_agg("admissible", "obs", "fig6", "true", P),
                         on_agg("decomposed", "obs", "fig6", "INCONCLUSIVE", P),
                         on_agg("block", "obs", "fig6", "positive", P, "N1"),
                         on_agg("block", "obs", "fig6", "positive", P, "N2"),
                     }});
        c.push_back({"eq6-fig7", "observable, with a non-observable upstream block", "eq6.bcn",
                     {{"fig7", "eq6-fig7.agg"}}, {}, false,
                     {
                         verdict("obs", "positive", P),
                         on_agg("acyclic", "", "fig7", "true", P),
                         on_agg("decomposed", "obs", "fig7", "INCONCLUSIVE", P),
                         on_agg("admissible", "obs", "fig7", "true", P),
                         on_agg("order", "", "fig7", "N1,N2", P),
                         on_agg("block", "obs", "fig7", "negative", P, "N1"),
                         on_agg("block", "obs", "fig7", "positive", P, "N2"),
                         block_lasso("obs", "fig7", "N1", "10,11", "10,11 : 0 | 1,0", D),
                     }});
        c.push_back({"recon-eq1", "reconstructible; no edges between distinct pairs", "recon-eq1.bcn", {}, {}, false,
                     {
                         verdict("recon", "positive", P),
                     }});
        c.push_back({"recon-eq2", "not reconstructible; self-loops on distinct pairs", "recon-eq2.bcn", {}, {}, false,
                     {
                         verdict("recon", "negative", P),
                         verdict("obs", "negative", D),
                         lasso("recon", "10,01", "10,01 : | 0", P),
                     }});
        c.push_back({"recon-ex6", "reconstructible, with a non-reconstructible block", "recon-ex6.bcn",
                     {{"ex6", "recon-ex6.agg"}}, {}, false,
                     {
                         verdict("recon", "positive", P),
                         verdict("obs", "positive", P),
                         on_agg("acyclic", "", "ex6", "true", P),
                         on_agg("admissible", "recon", "ex6", "true", P),
                         on_agg("decomposed", "recon", "ex6", "INCONCLUSIVE", P),
                         on_agg("block", "recon", "ex6", "positive", P, "N1"),
                         on_agg("block", "recon", "ex6", "negative", P, "N2"),
                         on_agg("block", "recon", "ex6", "positive", P, "N3"),
                         block_lasso("recon", "ex6", "N2", "10,01", "10,01 : | -", P),
                     }});
        c.push_back({"recon-ex7", "reconstructible, with a non-reconstructible block", "recon-ex7.bcn",
                     {{"ex7", "recon-ex7.agg"}}, {}, false,
                     {
                         verdict("recon", "positive", P),
                         verdict("obs", "positive", P),
                         on_agg("acyclic", "", "ex7", "false", P),
                         on_agg("admissible", "recon", "ex7", "true", P),
                         on_agg("decomposed", "recon", "ex7", "INCONCLUSIVE", P),
                         on_agg("block", "recon", "ex7", "positive", P, "N1"),
                         on_agg("block", "recon", "ex7", "negative", P, "N2"),
                         on_agg("block", "recon", "ex7", "positive", P, "N3"),
                         block_lasso("recon", "ex7", "N2", "10,01", "10,01 : | 11", P),
                     }});
        c.push_back({"recon-ex8", "not reconstructible, with reconstructible blocks in a cycle", "recon-ex8.bcn",
                     {{"ex8", "recon-ex8.agg"}}, {}, false,
                     {
                         verdict("recon", "negative", P),
                         lasso("recon", "1001,0000", "0000,1001 : | 00", P),
                         on_agg("acyclic", "", "ex8", "false", P),
                         on_agg("admissible", "recon", "ex8", "true", P),
                         on_agg("decomposed", "recon", "ex8", "INCONCLUSIVE", P),
                         on_agg("block", "recon", "ex8", "positive", P, "N1"),
                         on_agg("block", "recon", "ex8", "positive", P, "N2"),
                     }});

        CatalogEntry t{"tcell", "T-cell receptor kinetics: 37 states, 3 inputs, observed via a set", "tcell.bcn",
                       {{"fig10", "tcell-fig10.agg"}, {"fig17", "tcell-fig17.agg"}},
                       {{"obs16", "tcell-obs16.set"}, {"recon10", "tcell-recon10.set"}}, true, {}};
        auto& e = t.expectations;
        e.push_back(on_agg("acyclic", "", "fig10", "true", P));
        e.push_back(on_agg("acyclic", "", "fig17", "true", P));
        e.push_back(on_agg("admissible", "obs", "fig10", "true", P, "", "obs16"));
        e.push_back(on_agg("decomposed", "obs", "fig10", "PROVED", P, "", "obs16"));
        for (const char* b : {"N1", "N2", "N3", "N4", "N5"})
            e.push_back(on_agg("block", "obs", "fig10", "positive", P, b, "obs16"));
        e.push_back(on_agg("minimal", "obs", "fig10", "Grb2Sos,Itk,PLCgbind,SLP76", P, "N2"));
        e.push_back(on_agg("minimal", "obs", "fig10", "PAGCsk,Rlk,TCRbind,TCRphos,cCbl", P, "N1"));
        e.push_back(on_agg("necessary", "obs", "fig10", "Grb2Sos,Itk,PLCgbind,SLP76", P, "N2"));
        e.push_back(on_agg("necessary", "obs", "fig10", "PAGCsk,Rlk,TCRbind,TCRphos,cCbl", P, "N1"));
        e.push_back(on_agg("decomposed", "recon", "fig17", "PROVED", P, "", "recon10"));
        for (const char* b : {"N1", "N2", "N3", "N4_1", "N4_2", "N5"})
            e.push_back(on_agg("block", "recon", "fig17", "positive", P, b, "recon10"));
        e.push_back(on_agg("passes", "recon", "fig17", "true", P, "N5", "PKCth"));
        e.push_back(on_agg("necessary", "recon", "fig17", "", P, "N1"));
        e.push_back(on_agg("necessary", "recon", "fig17", "", P, "N5"));
        e.push_back(on_agg("passes", "recon", "fig17", "false", T, "N2", ""));
        for (const char* x : {"LAT", "Gads", "SLP76", "Itk", "Grb2Sos", "PLCgbind"})
            e.push_back(on_agg("passes", "recon", "fig17", "true", P, "N2", x));
        for (const char* x : {"IP3", "Ca", "Calcin", "NFAT", "PLCgact"})
            e.push_back(on_agg("passes", "recon", "fig17", "true", P, "N3", x));
        for (const char* x : {"Ras", "RasGRP1", "Raf", "MEK"})
            e.push_back(on_agg("passes", "recon", "fig17", "true", P, "N4_1", x));
        for (const char* x : {"CRE", "CREB", "Rsk", "ERK", "Fos", "AP1"})
            e.push_back(on_agg("passes", "recon", "fig17", "true", P, "N4_2", x));
        c.push_back(std::move(t));
        return c;
    }();
    return entries;
}

const CatalogEntry& entry(std::string_view name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw UnknownModel("unknown model '" + std::string(name) + "'");
}

std::vector<std::string> split_names(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream words(line);
        for (std::string w; words >> w;) out.push_back(w);
    }
    return out;
}

}  // namespace

std::string_view bundled_file(std::string_view file) {
    for (std::size_t i = 0; i < detail::kEmbeddedFileCount; ++i)
        if (detail::kEmbeddedFiles[i].name == file) return detail::kEmbeddedFiles[i].text;
    throw UnknownModel("no bundled file '" + std::string(file) + "'");
}

const Aggregation& LoadedModel::aggregation(const std::string& agg) const {
    auto it = aggregations.find(agg);
    if (it == aggregations.end()) throw UnknownModel("model '" + name + "' has no aggregation '" + agg + "'");
    return it->second;
}

const std::vector<std::string>& LoadedModel::observation_set(const std::string& set) const {
    auto it = observation_sets.find(set);
    if (it == observation_sets.end()) throw UnknownModel("model '" + name + "' has no observation set '" + set + "'");
    return it->second;
}

std::vector<ModelInfo> list_models() {
    std::vector<ModelInfo> out;
    for (const auto& e : catalog()) {
        ModelInfo info{e.name, e.summary, e.bcn_file, {}, {}};
        for (const auto& a : e.aggregations) info.aggregations.push_back(a.first);
        for (const auto& s : e.observation_sets) info.observation_sets.push_back(s.first);
        out.push_back(std::move(info));
    }
    return out;
}

bool has_model(std::string_view name) {
    return std::any_of(catalog().begin(), catalog().end(), [&](const CatalogEntry& e) { return e.name == name; });
}

LoadedModel load_model(std::string_view name) {
    const auto& e = entry(name);
    ParseOptions opts;
    opts.allow_no_outputs = e.allow_no_outputs;
    LoadedModel m{e.name, parse_bcn(bundled_file(e.bcn_file), opts), {}, {}, e.expectations};
    for (const auto& [agg, file] : e.aggregations) m.aggregations.emplace(agg, parse_aggregation(bundled_file(file), m.bcn));
    for (const auto& [set, file] : e.observation_sets) m.observation_sets.emplace(set, split_names(bundled_file(file)));
    return m;
}

}  // namespace bcnobs
