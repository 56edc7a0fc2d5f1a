#include "bcnobs/oracle.hpp"

#include <cstdint>
#include <string>

namespace bcnobs {

std::size_t equal_output_pairs(const Bcn& bcn, bool with_diagonal) {
    const std::uint64_t N = std::uint64_t{1} << bcn.num_states();
    std::size_t count = 0;
    for (std::uint64_t a = 0; a < N; ++a)
        for (std::uint64_t b = with_diagonal ? a : a + 1; b < N; ++b)
            if (bcn.observe(make_state(bcn, a)) == bcn.observe(make_state(bcn, b))) ++count;
    return count;
}

namespace {

void check_limits(const Bcn& bcn) {
    if (bcn.num_states() > kOracleMaxStates || bcn.num_inputs() > kOracleMaxInputs)
        throw OracleLimitError("oracle limited to n <= " + std::to_string(kOracleMaxStates) + " and m <= " +
                               std::to_string(kOracleMaxInputs));
}

// Memoised search over (ordered state pair, remaining inputs). A run is
// accepted when outputs agree at every step and, with `distinct_end`, the
// final states still differ.
class Search {
public:
    Search(const Bcn& bcn, std::size_t depth, bool distinct_end)
        : bcn_(bcn), N_(std::uint64_t{1} << bcn.num_states()), M_(std::uint64_t{1} << bcn.num_inputs()),
          depth_(depth), distinct_end_(distinct_end), memo_(N_ * N_ * (depth + 1), unknown) {}

    bool run(std::uint64_t a, std::uint64_t b, std::size_t d) {
        auto& slot = memo_[(a * N_ + b) * (depth_ + 1) + d];
        if (slot != unknown) return slot == yes;
        const auto xa = make_state(bcn_, a), xb = make_state(bcn_, b);
        bool ok = bcn_.observe(xa) == bcn_.observe(xb);
        if (ok && d == 0) ok = !distinct_end_ || a != b;
        if (ok && d > 0) {
            ok = false;
            for (std::uint64_t u = 0; u < M_ && !ok; ++u) {
                const auto iu = make_input(bcn_, u);
                ok = run(bcn_.step(xa, iu).code(), bcn_.step(xb, iu).code(), d - 1);
            }
        }
        slot = ok ? yes : no;
        return ok;
    }

    std::vector<InputVec> trace(std::uint64_t a, std::uint64_t b, std::size_t d) {
        std::vector<InputVec> out;
        for (; d > 0; --d) {
            const auto xa = make_state(bcn_, a), xb = make_state(bcn_, b);
            for (std::uint64_t u = 0; u < M_; ++u) {
                const auto iu = make_input(bcn_, u);
                const auto na = bcn_.step(xa, iu).code(), nb = bcn_.step(xb, iu).code();
                if (run(na, nb, d - 1)) {
                    out.push_back(iu);
                    a = na;
                    b = nb;
                    break;
                }
            }
        }
        return out;
    }

    std::uint64_t states() const { return N_; }

private:
    static constexpr std::int8_t unknown = -1, no = 0, yes = 1;
    const Bcn& bcn_;
    std::uint64_t N_, M_;
    std::size_t depth_;
    bool distinct_end_;
    std::vector<std::int8_t> memo_;
};

OracleVerdict decide(const Bcn& bcn, Property property, std::size_t horizon, std::size_t steps, bool distinct_end) {
    OracleVerdict v;
    v.property = property;
    v.horizon = horizon;
    Search search(bcn, steps, distinct_end);
    for (std::uint64_t a = 0; a < search.states(); ++a) {
        for (std::uint64_t b = a + 1; b < search.states(); ++b) {
            if (!search.run(a, b, steps)) continue;
            v.positive = false;
            v.counterexample = OracleCounterexample{make_state(bcn, a), make_state(bcn, b), search.trace(a, b, steps)};
            return v;
        }
    }
    return v;
}

}  // namespace

OracleVerdict oracle_observable(const Bcn& bcn, std::optional<std::size_t> horizon) {
    check_limits(bcn);
    const std::size_t L = horizon.value_or(equal_output_pairs(bcn, true));
    return decide(bcn, Property::observability, L, L, false);
}

OracleVerdict oracle_reconstructible(const Bcn& bcn, std::optional<std::size_t> horizon) {
    check_limits(bcn);
    const std::size_t p = horizon.value_or(equal_output_pairs(bcn, false));
    // Inputs u_0..u_p, outputs compared through step p+1.
    return decide(bcn, Property::reconstructibility, p, p + 1, true);
}

}  // namespace bcnobs
