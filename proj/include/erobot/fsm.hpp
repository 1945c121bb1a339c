#pragma once

// Finite-state machines on an associative field closed by a one-step
// delayed feedback loop: input (x1, x2) = (external input, fed-back state),
// output (y1, y2) = (next state, external output).

#include <cstddef>
#include <string>
#include <vector>

#include "erobot/field.hpp"
#include "erobot/rng.hpp"
#include "erobot/symbol.hpp"

namespace erobot::fsm {

/// Reference Mealy machine over states "q0".."q{n-1}", inputs and outputs
/// "0".."{k-1}".
struct MealyMachine {
    std::size_t states = 0;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::size_t start = 0;
    std::vector<std::vector<std::size_t>> next; ///< next[q][a]
    std::vector<std::vector<std::size_t>> out;  ///< out[q][a]

    static MealyMachine random(std::size_t states, std::size_t inputs, std::size_t outputs,
                               SessionRng& rng);
    /// Two states, input bits, output = parity of the bits read so far.
    static MealyMachine parity();

    Symbol state_symbol(std::size_t q) const;
    Symbol input_symbol(std::size_t a) const;
    Symbol output_symbol(std::size_t b) const;

    std::vector<Symbol> simulate(const std::vector<std::size_t>& input) const;
};

/// A field of widths 2 -> 2. Retrieval needs an exact match (x_inh = 0.5), so
/// an untrained transition fails to retrieve instead of borrowing a half match.
field::AssociativeField fsm_wrap(std::size_t capacity = 64);

/// Records every transition of `m` in teacher / learn-new mode. Returns the
/// number of slots recorded.
std::size_t fsm_train(field::AssociativeField& f, const MealyMachine& m, SessionRng& rng);

struct FsmRun {
    std::vector<Symbol> outputs;
    bool starved = false;
    std::size_t starved_at = 0; ///< input index that found no transition
};

/// Runs the wrapped field in memory mode from `start`, feeding y1 back as x2.
FsmRun fsm_simulate(field::AssociativeField& f, const Symbol& start,
                    const std::vector<Symbol>& input, SessionRng& rng);

} // namespace erobot::fsm
