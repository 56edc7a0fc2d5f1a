#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bcnobs/bcn.hpp"

namespace bcnobs {

inline constexpr std::size_t kOracleMaxStates = 4;
inline constexpr std::size_t kOracleMaxInputs = 2;

class OracleLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleCounterexample {
    StateVec x0, x0b;
    std::vector<InputVec> inputs;
};

struct OracleVerdict {
    Property property = Property::observability;
    bool positive = true;
    std::size_t horizon = 0;
    std::optional<OracleCounterexample> counterexample;
};

/// Number of unordered equal-output pairs, diagonal pairs included or not.
std::size_t equal_output_pairs(const Bcn& bcn, bool with_diagonal);

/// Bounded search straight from the definitions, for n <= 4 and m <= 2.
/// Negative iff two distinct initial states admit an input sequence of
/// length `horizon` along which outputs stay equal (observability), or along
/// which outputs stay equal and the final states still differ
/// (reconstructibility). The default horizon is the number of equal-output
/// pairs (diagonal included for observability, excluded otherwise).
OracleVerdict oracle_observable(const Bcn& bcn, std::optional<std::size_t> horizon = std::nullopt);
OracleVerdict oracle_reconstructible(const Bcn& bcn, std::optional<std::size_t> horizon = std::nullopt);

}  // namespace bcnobs
