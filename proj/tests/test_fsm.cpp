#include <gtest/gtest.h>

#include "erobot/fsm.hpp"

using namespace erobot;
using namespace erobot::fsm;

namespace {

// Direct table walk, independent of the field.
std::vector<std::string> walk(const MealyMachine& m, const std::vector<std::size_t>& input)
{
    std::vector<std::string> out;
    std::size_t q = m.start;
    for (std::size_t a : input) {
        out.push_back(std::to_string(m.out[q][a]));
        q = m.next[q][a];
    }
    return out;
}

std::vector<std::string> tokens(const std::vector<Symbol>& v)
{
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.token());
    return out;
}

std::vector<Symbol> symbols(const MealyMachine& m, const std::vector<std::size_t>& input)
{
    std::vector<Symbol> out;
    for (std::size_t a : input) out.push_back(m.input_symbol(a));
    return out;
}

} // namespace

TEST(Fsm, ParityOfABitString)
{
    const MealyMachine m = MealyMachine::parity();
    SessionRng rng(1);
    auto f = fsm_wrap();
    EXPECT_EQ(fsm_train(f, m, rng), 4u);
    const std::vector<std::size_t> bits{1, 1, 0, 1};
    const FsmRun run = fsm_simulate(f, m.state_symbol(m.start), symbols(m, bits), rng);
    EXPECT_FALSE(run.starved);
    EXPECT_EQ(tokens(run.outputs), (std::vector<std::string>{"1", "0", "0", "1"}));
    EXPECT_EQ(tokens(run.outputs), walk(m, bits));
}

TEST(Fsm, RandomMachinesMatchTheirTables)
{
    SessionRng rng(7);
    for (int k = 0; k < 10; ++k) {
        const MealyMachine m = MealyMachine::random(3, 2, 2, rng);
        auto f = fsm_wrap();
        fsm_train(f, m, rng);
        for (unsigned code = 0; code < (1u << 5); ++code) {
            std::vector<std::size_t> in;
            for (int b = 4; b >= 0; --b) in.push_back((code >> b) & 1u);
            const FsmRun run = fsm_simulate(f, m.state_symbol(m.start), symbols(m, in), rng);
            ASSERT_FALSE(run.starved);
            EXPECT_EQ(tokens(run.outputs), walk(m, in));
            EXPECT_EQ(tokens(m.simulate(in)), walk(m, in));
        }
    }
}

TEST(Fsm, UntrainedTransitionStarves)
{
    MealyMachine m = MealyMachine::parity();
    SessionRng rng(3);
    auto f = fsm_wrap();
    fsm_train(f, m, rng);
    f.erase_slot(3); // q1 on input 1
    const FsmRun run = fsm_simulate(f, m.state_symbol(0), symbols(m, {1, 0, 1, 1}), rng);
    EXPECT_TRUE(run.starved);
    EXPECT_EQ(run.starved_at, 2u);
    EXPECT_EQ(run.outputs.size(), 2u);
}

TEST(Fsm, SimulationNeedsMemoryMode)
{
    auto f = fsm_wrap();
    f.set_select_source(field::OutputSource::teacher);
    SessionRng rng(0);
    EXPECT_THROW(fsm_simulate(f, Symbol("q0"), {Symbol('0')}, rng), ContractViolation);
}
