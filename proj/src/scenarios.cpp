#include "erobot/scenarios.hpp"

#include <fmt/format.h>

namespace erobot::scenarios {

using field::LearnMode;
using programs::RunResult;
using programs::TmCommand;
using programs::TmProgram;
using robot::Robot;
using robot::RobotConfig;

namespace {

void load_tape(Robot& r, std::string_view literal)
{
    const world::TapeState t = world::parse_tape_literal(literal);
    r.world().clear_tape();
    for (std::size_t i = 0; i < world::kTapeLength; ++i) {
        if (!t.square(i).is_blank()) r.world().edit_square(i, t.square(i));
    }
    r.world().set_scan(t.i_scan());
}

void append(RunResult& acc, RunResult part)
{
    acc.outcome = part.outcome;
    acc.halt_symbol = part.halt_symbol;
    acc.steps += part.steps;
    acc.final_tape = std::move(part.final_tape);
    for (auto& row : part.trace) acc.trace.push_back(std::move(row));
}

std::string describe(const RunResult& r)
{
    if (r.outcome == programs::Outcome::halted) {
        return fmt::format("halted {} after {} steps, tape {}", r.halt_symbol.render(), r.steps,
                           r.final_tape);
    }
    return fmt::format("{} after {} steps, tape {}", programs::to_string(r.outcome), r.steps,
                       r.final_tape);
}

void trace_lines(std::vector<std::string>& lines, const RunResult& r)
{
    for (const auto& row : r.trace) lines.push_back(world::format_row(row));
}

std::string expression_tape(const std::string& expr) { return "A" + expr + "A@1"; }

long scan_bound(std::size_t squares) { return 4 * static_cast<long>(squares) + 4; }

} // namespace

std::vector<field::LtmRow> trained_as_rows()
{
    static const std::vector<field::LtmRow> rows = [] {
        Robot scratch(RobotConfig::standard(3), 0);
        programs::load_program(scratch.am(), programs::build_rewriting_scanner(), 0);
        programs::train_as(scratch);
        std::vector<field::LtmRow> out;
        const auto& slots = scratch.as().slots();
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].occupied) out.push_back({i, slots[i].gx, slots[i].gy, slots[i].e});
        }
        return out;
    }();
    return rows;
}

void preload_trained_as(Robot& r)
{
    for (const auto& row : trained_as_rows()) r.as().store_slot(row.index, row.gx, row.gy, row.e);
}

TmProgram build_eye_switching_checker()
{
    TmProgram p = programs::with_eye_control(programs::build_checker(), [](const TmCommand& c) {
        const std::string key = c.in_read.token() + c.in_state.token();
        if (key == ")0" || key == "A0") return Symbol('1');
        if (key == "(1" || key == "A2") return Symbol('0');
        return Symbol();
    });
    p.name = "eye-switching-checker";
    return p;
}

TmProgram build_scan_then_check_closing_eye()
{
    TmProgram p = programs::with_eye_control(programs::build_scan_then_check(), [](const TmCommand& c) {
        return c.in_read == Symbol('A') && c.in_state == Symbol('4') ? Symbol('1') : Symbol();
    });
    p.name = "scan-then-check-closing-eye";
    return p;
}

Robot make_example(int n, std::uint64_t seed)
{
    if (n < 1 || n > 5) throw ContractViolation(fmt::format("there is no example {}", n));
    Robot r(RobotConfig::standard(n >= 4 ? 4 : 3), seed);
    Symbol start('3');
    switch (n) {
    case 1:
        programs::load_program(r.am(), programs::build_checker(), kCheckerSlot);
        start = Symbol('0');
        break;
    case 2:
        programs::load_program(r.am(), programs::build_checker(), kCheckerSlot);
        programs::load_program(r.am(), programs::build_scan_then_check(), kSecondProgramSlot);
        break;
    case 3:
        programs::load_program(r.am(), programs::build_rewriting_scanner(), 0);
        programs::load_program(r.am(), programs::build_checker(), kSecondProgramSlot);
        r.as().set_learn_mode(LearnMode::all);
        start = Symbol('8');
        break;
    case 4:
        programs::load_program(r.am(), programs::build_checker(), kCheckerSlot);
        programs::load_program(r.am(), build_scan_then_check_closing_eye(), kSecondProgramSlot);
        break;
    case 5:
        programs::load_program(r.am(), build_eye_switching_checker(), kCheckerSlot);
        programs::load_program(r.am(), build_scan_then_check_closing_eye(), kSecondProgramSlot);
        break;
    }
    if (n == 3) {
        load_tape(r, "AAAAAAAAAA@0");
    } else {
        preload_trained_as(r);
        load_tape(r, kDemoTape);
    }
    programs::initialise_state(r, start);
    return r;
}

bool run_to_handoff(Robot& r, long max_steps, RunResult& acc)
{
    programs::RunHooks hooks;
    long taken = 0;
    while (taken < max_steps) {
        if (r.world().symbol_uttered() == Symbol('0') && r.world().i_scan() == 1) return true;
        RunResult part = programs::run_until_halt(r, 1, hooks);
        taken += part.steps;
        const bool stopped = part.outcome != programs::Outcome::step_limit;
        append(acc, std::move(part));
        if (stopped) return false;
    }
    return r.world().symbol_uttered() == Symbol('0') && r.world().i_scan() == 1;
}

char verdict_of(const RunResult& r)
{
    if (r.outcome != programs::Outcome::halted || r.halt_symbol.token().size() != 1) return '?';
    return r.halt_symbol.token()[0];
}

namespace {

RunResult run_eyes_open_reference(const std::string& tape, std::uint64_t seed, long max_steps)
{
    Robot ref = make_example(2, seed);
    load_tape(ref, tape);
    return programs::run_until_halt(ref, max_steps);
}

bool same_result(const RunResult& a, const RunResult& b)
{
    return a.outcome == b.outcome && a.halt_symbol == b.halt_symbol && a.final_tape == b.final_tape;
}

} // namespace

ExampleReport run_example(int n, Robot& r)
{
    ExampleReport rep;
    const long limit = 1000;
    rep.lines.push_back(fmt::format("example {}: tape {}, state {}", n,
                                    world::format_tape_literal(r.world()),
                                    r.world().symbol_uttered().render()));
    switch (n) {
    case 1:
        rep.run = programs::run_until_halt(r, limit);
        trace_lines(rep.lines, rep.run);
        break;
    case 2: {
        const std::string tape = world::format_tape_literal(r.world());
        if (run_to_handoff(r, limit, rep.run)) {
            r.set_eye(false);
            trace_lines(rep.lines, rep.run);
            rep.lines.push_back(fmt::format("eye closed after step {}", r.time()));
            RunResult rest = programs::run_until_halt(r, limit);
            trace_lines(rep.lines, rest);
            append(rep.run, std::move(rest));
        } else {
            trace_lines(rep.lines, rep.run);
        }
        rep.reference = run_eyes_open_reference(tape, r.rng().seed(), limit);
        break;
    }
    case 3: {
        const std::size_t recorded = programs::train_as(r, {kWorkingSquares, true, {}});
        rep.lines.push_back(fmt::format("AS trained: {} slots recorded", recorded));
        r.as().set_learn_mode(LearnMode::none);
        const std::string tape = kDemoTape;
        load_tape(r, tape);
        // One rewriting pass over the expression loads working memory.
        const long squares = static_cast<long>(std::string_view(kDemoTape).find('@'));
        r.world().set_scan(0);
        programs::initialise_state(r, Symbol('8'));
        rep.run = programs::run_until_halt(r, 2 * squares);
        r.world().set_scan(1);
        programs::initialise_state(r, Symbol('0'));
        r.set_eye(false);
        trace_lines(rep.lines, rep.run);
        rep.lines.push_back(fmt::format("eye closed after step {}", r.time()));
        RunResult rest = programs::run_until_halt(r, limit);
        trace_lines(rep.lines, rest);
        append(rep.run, std::move(rest));
        rep.reference = run_eyes_open_reference(tape, r.rng().seed(), limit);
        break;
    }
    case 4:
    case 5: {
        const std::string tape = world::format_tape_literal(r.world());
        rep.run = programs::run_until_halt(r, limit);
        trace_lines(rep.lines, rep.run);
        rep.reference = run_eyes_open_reference(tape, r.rng().seed(), limit);
        break;
    }
    default:
        throw ContractViolation(fmt::format("there is no example {}", n));
    }
    rep.lines.push_back("outcome: " + describe(rep.run));
    if (rep.reference) {
        rep.agrees = same_result(rep.run, *rep.reference);
        rep.lines.push_back("eyes-open reference: " + describe(*rep.reference));
        rep.lines.push_back(rep.agrees ? "agreement: same verdict and tape" : "agreement: MISMATCH");
    }
    return rep;
}

ExamResult exam(const std::string& expr, const ExamOptions& opts)
{
    ExamResult res;
    res.oracle = programs::balance_oracle(expr);
    const long bound = programs::checker_step_bound(expr.size());
    if (!opts.mental) {
        Robot r = make_example(1, opts.seed);
        load_tape(r, expression_tape(expr));
        res.run = programs::run_until_halt(r, bound);
    } else {
        if (expr.size() + 2 > kWorkingSquares) {
            throw ContractViolation(
                fmt::format("mental runs need the whole tape within squares 0-{}", kWorkingSquares - 1));
        }
        Robot r = make_example(2, opts.seed);
        load_tape(r, expression_tape(expr));
        if (run_to_handoff(r, scan_bound(expr.size() + 2), res.run)) {
            r.set_eye(false);
            std::size_t next_toggle = 0;
            long since = 0;
            programs::RunHooks hooks;
            hooks.before_step = [&](Robot& bot) {
                while (next_toggle < opts.toggle_after_handoff.size() &&
                       opts.toggle_after_handoff[next_toggle] == since) {
                    bot.set_eye(!bot.eye_open());
                    ++next_toggle;
                }
                ++since;
            };
            append(res.run, programs::run_until_halt(r, bound, hooks));
        }
    }
    res.verdict = verdict_of(res.run);
    res.agrees = res.verdict == res.oracle;
    return res;
}

} // namespace erobot::scenarios
