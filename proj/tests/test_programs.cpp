#include <gtest/gtest.h>

#include <set>

#include "erobot/programs.hpp"
#include "erobot/scenarios.hpp"
#include "support.hpp"

using namespace erobot;
using namespace erobot::programs;
using testsupport::all_expressions;
using testsupport::interpret;
using testsupport::stack_oracle;

TEST(Oracle, CounterAgreesWithStack)
{
    for (const auto& e : all_expressions(10)) EXPECT_EQ(balance_oracle(e), stack_oracle(e)) << e;
}

TEST(Checker, InterpreterMatchesStackOracleWithinBound)
{
    const TmProgram p = build_checker();
    p.validate();
    EXPECT_EQ(p.commands.size(), 12u);
    EXPECT_EQ(p.motor_width(), 3u);
    for (const auto& e : all_expressions(10)) {
        const auto run = interpret(p, "A" + e + "A", 1, '0', 1'000'000);
        ASSERT_TRUE(run.halted) << e;
        EXPECT_EQ(run.verdict, stack_oracle(e)) << e;
        EXPECT_LE(run.steps, checker_step_bound(e.size())) << e;
    }
}

TEST(Checker, RobotRunMatchesInterpreterStepForStep)
{
    const TmProgram p = build_checker();
    for (const auto& e : all_expressions(6)) {
        const auto want = interpret(p, "A" + e + "A", 1, '0', 10'000);
        const auto got = scenarios::exam(e);
        EXPECT_EQ(got.run.outcome, Outcome::halted) << e;
        EXPECT_EQ(got.verdict, want.verdict) << e;
        EXPECT_EQ(got.run.steps, want.steps) << e;
        EXPECT_TRUE(got.agrees) << e;
    }
}

TEST(ScanThenCheck, HandsOffToTheChecker)
{
    TmProgram both = build_checker();
    const TmProgram scan = build_scan_then_check();
    EXPECT_EQ(scan.commands.size(), 12u);
    both.commands.insert(both.commands.end(), scan.commands.begin(), scan.commands.end());
    both.validate();
    for (const auto& e : all_expressions(6)) {
        const auto run = interpret(both, "A" + e + "A", 1, '3', 10'000);
        ASSERT_TRUE(run.halted) << e;
        EXPECT_EQ(run.verdict, stack_oracle(e)) << e;
    }
}

TEST(Scanner, LeavesTheTapeAsItWas)
{
    const TmProgram p = build_rewriting_scanner();
    p.validate();
    const std::string tape = "A(X)TFA(((";
    const auto run = interpret(p, tape, 0, '8', 2 * static_cast<long>(tape.size()) - 1);
    EXPECT_FALSE(run.halted);
    EXPECT_EQ(run.tape, tape);
}

TEST(Program, ValidateRejectsConflictsAndHaltExits)
{
    TmProgram p = build_checker();
    p.commands.push_back(p.commands.front());
    p.commands.back().out_write = Symbol('T');
    EXPECT_THROW(p.validate(), ContractViolation);
    TmProgram q = build_checker();
    q.commands.push_back({Symbol('A'), Symbol('H'), Symbol('0'), Symbol('S'), Symbol('A'), {}});
    EXPECT_THROW(q.validate(), ContractViolation);
}

TEST(Program, TextRoundTrip)
{
    for (const auto& p : {build_checker(), build_rewriting_scanner(), build_scan_then_check(),
                          scenarios::build_eye_switching_checker()}) {
        const TmProgram back = parse_program(format_program(p), p.name);
        EXPECT_EQ(back.commands, p.commands);
    }
    const auto p = parse_program("# c\n(,0 -> 0,R,(   # move\nA,2 -> H,S,T,1\n");
    ASSERT_EQ(p.commands.size(), 2u);
    EXPECT_EQ(p.commands[1].out_eye, Symbol('1'));
    EXPECT_EQ(p.motor_width(), 4u);
    EXPECT_THROW(parse_program("(,0 0,R,("), ParseError);
    EXPECT_THROW(parse_program("(,0 -> 0,Q,("), ParseError);
    EXPECT_THROW(parse_program("(,0 -> 0,R"), ParseError);
    EXPECT_THROW(parse_program("# only comments\n"), ParseError);
}

TEST(Program, LoadRespectsCapacityAndOccupancy)
{
    field::FieldConfig c;
    c.capacity = 24;
    field::AssociativeField am(2, 3, c);
    load_program(am, build_checker(), 0);
    EXPECT_EQ(am.occupied_count(), 12u);
    EXPECT_DOUBLE_EQ(am.slots()[0].e, 0.0);
    EXPECT_THROW(load_program(am, build_rewriting_scanner(), 10), field::CapacityError); // 10 and 11 taken
    EXPECT_THROW(load_program(am, build_checker(), 13), field::CapacityError);         // 13 + 12 > 24
    load_program(am, build_rewriting_scanner(), 12);
    EXPECT_EQ(am.occupied_count(), 24u);
}

TEST(Curriculum, ParsesAndRejects)
{
    const auto items = parse_curriculum("A(A@1 | 0 | 100 | am-source=teacher am-learn=new\n# note\n\nA)A@1|0|50|eye=open\n");
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].tape, "A(A@1");
    EXPECT_EQ(items[0].start_state, Symbol('0'));
    EXPECT_EQ(items[1].max_steps, 50);
    EXPECT_EQ(items[1].modes, "eye=open");
    EXPECT_THROW(parse_curriculum("A(A@1 | 0 | 100"), ParseError);
    EXPECT_THROW(parse_curriculum("A(A@1 | 0 | -4 | x=y"), ParseError);
    EXPECT_THROW(parse_curriculum(""), ParseError);

    robot::Robot r(robot::RobotConfig::standard(3), 0);
    EXPECT_THROW(apply_modes(r, "am-learn=sometimes"), ParseError);
    EXPECT_THROW(apply_modes(r, "volume=11"), ParseError);
    apply_modes(r, "am-source=teacher as-source=memory");
    EXPECT_FALSE(r.eye_open());
}

TEST(Teaching, RecordsEachCommandOnce)
{
    robot::Robot r(robot::RobotConfig::standard(3), 0);
    EXPECT_EQ(teach_am(r, build_checker(), checker_curriculum()), 12u);
    std::set<std::string> inputs;
    for (const auto& s : r.am().slots()) {
        if (!s.occupied) continue;
        inputs.insert(s.gx.render());
        const auto* c = build_checker().find(s.gx[0], s.gx[1]);
        ASSERT_NE(c, nullptr);
        EXPECT_EQ(world::MotorCommand::from_vector(s.gy), c->motor());
    }
    EXPECT_EQ(inputs.size(), 12u);
    // A second pass over the same curriculum adds nothing.
    EXPECT_EQ(teach_am(r, build_checker(), checker_curriculum()), 0u);
}

TEST(Teaching, ClosedEyeIsRejected)
{
    robot::Robot r(robot::RobotConfig::standard(3), 0);
    auto items = checker_curriculum();
    items[0].modes += " eye=closed";
    EXPECT_THROW(teach_am(r, build_checker(), items), TeachingError);
}

TEST(Training, OneSlotPerSquareAndSymbol)
{
    robot::Robot r(robot::RobotConfig::standard(3), 0);
    load_program(r.am(), build_rewriting_scanner(), 0);
    EXPECT_EQ(train_as(r), 60u);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& s : r.as().slots()) {
        if (!s.occupied) continue;
        EXPECT_EQ(s.gx[1], s.gy[0]);
        seen.insert({s.gx[0].token(), s.gx[1].token()});
    }
    EXPECT_EQ(seen.size(), 60u);
    for (std::size_t sq = 0; sq < 10; ++sq) {
        for (char c : std::string("A()XTF")) {
            EXPECT_TRUE(seen.count({position_token(sq).token(), std::string(1, c)})) << sq << c;
        }
    }
}

TEST(Training, LearnAllRecordsEveryWrite)
{
    robot::Robot r(robot::RobotConfig::standard(3), 0);
    load_program(r.am(), build_rewriting_scanner(), 0);
    TrainOptions o;
    o.learn_all = true;
    // Each pass takes 2 steps per square and writes on every step; the write of
    // the last step is echoed only by a step that never comes.
    EXPECT_EQ(train_as(r, o), 6u * (2 * 10 - 1));
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& s : r.as().slots()) {
        if (s.occupied) seen.insert({s.gx[0].token(), s.gx[1].token()});
    }
    EXPECT_EQ(seen.size(), 60u);
}

TEST(Training, NeedsTheScannerInAm)
{
    robot::Robot r(robot::RobotConfig::standard(3), 0);
    EXPECT_THROW(train_as(r), std::exception);
}

TEST(StepBound, QuadraticInLength)
{
    EXPECT_EQ(checker_step_bound(0), 4);
    EXPECT_EQ(checker_step_bound(1), 4);
    EXPECT_EQ(checker_step_bound(8), 256);
}

TEST(Run, StopsAtTheStepLimit)
{
    robot::Robot r = scenarios::make_example(1, 0);
    const auto res = run_until_halt(r, 5);
    EXPECT_EQ(res.outcome, Outcome::step_limit);
    EXPECT_EQ(res.steps, 5);
    EXPECT_EQ(res.trace.size(), 5u);
    EXPECT_EQ(to_string(Outcome::boundary), "boundary");
}
