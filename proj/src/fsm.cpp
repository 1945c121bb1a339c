#include "erobot/fsm.hpp"

#include <fmt/format.h>

namespace erobot::fsm {

using field::AssociativeField;
using field::FieldConfig;
using field::LearnMode;
using field::OutputSource;

MealyMachine MealyMachine::random(std::size_t states, std::size_t inputs, std::size_t outputs,
                                  SessionRng& rng)
{
    if (states == 0 || inputs == 0 || outputs == 0) throw ContractViolation("empty machine");
    MealyMachine m;
    m.states = states;
    m.inputs = inputs;
    m.outputs = outputs;
    m.start = rng.uniform_index(states);
    m.next.assign(states, std::vector<std::size_t>(inputs));
    m.out.assign(states, std::vector<std::size_t>(inputs));
    for (std::size_t q = 0; q < states; ++q) {
        for (std::size_t a = 0; a < inputs; ++a) {
            m.next[q][a] = rng.uniform_index(states);
            m.out[q][a] = rng.uniform_index(outputs);
        }
    }
    return m;
}

MealyMachine MealyMachine::parity()
{
    MealyMachine m;
    m.states = m.inputs = m.outputs = 2;
    m.next = {{0, 1}, {1, 0}};
    m.out = {{0, 1}, {1, 0}};
    return m;
}

Symbol MealyMachine::state_symbol(std::size_t q) const { return Symbol(fmt::format("q{}", q)); }
Symbol MealyMachine::input_symbol(std::size_t a) const { return Symbol(fmt::format("{}", a)); }
Symbol MealyMachine::output_symbol(std::size_t b) const { return Symbol(fmt::format("{}", b)); }

std::vector<Symbol> MealyMachine::simulate(const std::vector<std::size_t>& input) const
{
    std::vector<Symbol> result;
    std::size_t q = start;
    for (std::size_t a : input) {
        result.push_back(output_symbol(out.at(q).at(a)));
        q = next[q][a];
    }
    return result;
}

AssociativeField fsm_wrap(std::size_t capacity)
{
    FieldConfig cfg;
    cfg.capacity = capacity;
    cfg.x_inh = 0.5;
    return AssociativeField(2, 2, cfg);
}

std::size_t fsm_train(AssociativeField& f, const MealyMachine& m, SessionRng& rng)
{
    if (f.nx() != 2 || f.ny() != 2) throw ContractViolation("FSM field must be 2 -> 2");
    const std::size_t before = f.occupied_count();
    f.set_select_source(OutputSource::teacher);
    f.set_learn_mode(LearnMode::novel);
    for (std::size_t q = 0; q < m.states; ++q) {
        for (std::size_t a = 0; a < m.inputs; ++a) {
            const SymbolVector x{m.input_symbol(a), m.state_symbol(q)};
            const SymbolVector y{m.state_symbol(m.next[q][a]), m.output_symbol(m.out[q][a])};
            f.cycle(x, y, rng);
        }
    }
    f.set_learn_mode(LearnMode::none);
    f.set_select_source(OutputSource::memory);
    return f.occupied_count() - before;
}

FsmRun fsm_simulate(AssociativeField& f, const Symbol& start, const std::vector<Symbol>& input,
                    SessionRng& rng)
{
    if (f.config().select_source != OutputSource::memory) {
        throw ContractViolation("simulation needs the field in memory mode");
    }
    FsmRun run;
    Symbol state = start;
    for (std::size_t k = 0; k < input.size(); ++k) {
        const field::CycleResult c = f.cycle(SymbolVector{input[k], state}, std::nullopt, rng);
        if (!c.retrieved) {
            run.starved = true;
            run.starved_at = k;
            break;
        }
        state = c.y[0];
        run.outputs.push_back(c.y[1]);
    }
    return run;
}

} // namespace erobot::fsm
