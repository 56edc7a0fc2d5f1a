#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcnobs/aggregation.hpp"
#include "bcnobs/bcn.hpp"

namespace bcnobs {

class UnknownModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Provenance : std::uint8_t { published, derived, trivial };
const char* to_string(Provenance p);

/// One expected result for a bundled model. `check` selects what is
/// computed; the remaining fields narrow it down and may be empty:
///   verdict     direct pair-graph verdict: positive | negative
///   lasso       witness text of lasso_from(`start`), on the whole network
///               or on one block; OWPG paths run through a diagonal vertex
///   owpg        "<diagonal>/<non-diagonal>" vertex counts
///   decomposed  PROVED | INCONCLUSIVE
///   block       status of one block in the decomposed run
///   acyclic     true | false
///   order       block names in topological order
///   cycle       block names along the reported cycle
///   admissible  true | false
///   cost        "<aggregated>/<direct>"
///   minimal     minimal observation sets, sorted, ';'-separated
///   necessary   leave-one-out necessary nodes, sorted
///   passes      does observing `observe` make `block` pass: true | false
struct Expectation {
    std::string check;
    std::string property;     // obs | recon | empty
    std::string aggregation;  // bundled aggregation name or empty
    std::string observe;      // observation set name or comma list
    std::string block;
    std::string start;        // lasso start pair "lo,hi" as bit strings
    std::string value;
    Provenance provenance = Provenance::published;

    std::string key() const;
};

struct ModelInfo {
    std::string name;
    std::string summary;
    std::string bcn_file;
    std::vector<std::string> aggregations;
    std::vector<std::string> observation_sets;
};

struct LoadedModel {
    std::string name;
    Bcn bcn;
    std::map<std::string, Aggregation> aggregations;
    std::map<std::string, std::vector<std::string>> observation_sets;
    std::vector<Expectation> expectations;

    const Aggregation& aggregation(const std::string& agg) const;
    const std::vector<std::string>& observation_set(const std::string& set) const;
};

std::vector<ModelInfo> list_models();
bool has_model(std::string_view name);
LoadedModel load_model(std::string_view name);

/// Raw text of a bundled data file such as "eq1.bcn"; throws UnknownModel.
std::string_view bundled_file(std::string_view file);

}  // namespace bcnobs
