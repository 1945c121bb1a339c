#include "erobot/programs.hpp"

#include <charconv>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace erobot::programs {

using field::LearnMode;
using field::OutputSource;
using robot::Robot;
using world::MotorCommand;

namespace {

TmCommand cmd(char read, char state, char next, char move, char write, Symbol eye = {})
{
    return {Symbol(read), Symbol(state), Symbol(next), Symbol(move), Symbol(write), std::move(eye)};
}

constexpr std::string_view kSweepSymbols = "()XTF";

} // namespace

const TmCommand* TmProgram::find(const Symbol& read, const Symbol& state) const
{
    for (const auto& c : commands) {
        if (c.in_read == read && c.in_state == state) return &c;
    }
    return nullptr;
}

std::size_t TmProgram::motor_width() const
{
    for (const auto& c : commands) {
        if (!c.out_eye.is_blank()) return 4;
    }
    return 3;
}

void TmProgram::validate() const
{
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& c : commands) {
        if (c.in_state == robot::kHalt) {
            throw ContractViolation(name + ": command out of the halt state");
        }
        if (!seen.emplace(c.in_read.token(), c.in_state.token()).second) {
            throw ContractViolation(fmt::format("{}: duplicate command for ({},{})", name,
                                                c.in_read.render(), c.in_state.render()));
        }
        world::move_of(c.out_move);
    }
}

char balance_oracle(std::string_view expr)
{
    long depth = 0;
    for (char c : expr) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth < 0) return 'F';
        } else {
            throw ContractViolation("balance_oracle accepts only parentheses");
        }
    }
    return depth == 0 ? 'T' : 'F';
}

TmProgram build_checker()
{
    // State 0 runs right over '(' and 'X' to the first ')'. That ')' is
    // re-read in states 1 and 2, crossed out, and the head walks left over
    // 'X' toggling 1/2. Crossed-out squares come in pairs, so it meets the
    // matching '(' in state 1 (crossed out, back to 0) or the left 'A' in
    // state 1 (unmatched ')'). From the right 'A' the walk starts in state 2
    // and any '(' left over means F.
    TmProgram p;
    p.name = "checker";
    p.start_state = Symbol('0');
    p.commands = {
        cmd('(', '0', '0', 'R', '('),
        cmd('X', '0', '0', 'R', 'X'),
        cmd(')', '0', '1', 'S', ')'),
        cmd(')', '1', '2', 'S', ')'),
        cmd(')', '2', '1', 'L', 'X'),
        cmd('X', '1', '2', 'L', 'X'),
        cmd('X', '2', '1', 'L', 'X'),
        cmd('(', '1', '0', 'S', 'X'),
        cmd('(', '2', 'H', 'S', 'F'),
        cmd('A', '0', '2', 'L', 'A'),
        cmd('A', '1', 'H', 'S', 'F'),
        cmd('A', '2', 'H', 'S', 'T'),
    };
    return p;
}

TmProgram build_rewriting_scanner()
{
    TmProgram p;
    p.name = "rewriting-scanner";
    p.start_state = Symbol('8');
    for (char c : std::string_view("A()XTF")) {
        p.commands.push_back(cmd(c, '8', '9', 'S', c));
        p.commands.push_back(cmd(c, '9', '8', 'R', c));
    }
    return p;
}

TmProgram build_scan_then_check()
{
    TmProgram p;
    p.name = "scan-then-check";
    p.start_state = Symbol('3');
    for (char c : kSweepSymbols) p.commands.push_back(cmd(c, '3', '3', 'R', c));
    p.commands.push_back(cmd('A', '3', '4', 'L', 'A'));
    for (char c : kSweepSymbols) p.commands.push_back(cmd(c, '4', '4', 'L', c));
    p.commands.push_back(cmd('A', '4', '0', 'R', 'A'));
    return p;
}

TmProgram with_eye_control(TmProgram p, const std::function<Symbol(const TmCommand&)>& eye_for)
{
    for (auto& c : p.commands) c.out_eye = eye_for(c);
    return p;
}

void load_program(field::AssociativeField& am, const TmProgram& p, std::size_t base_slot)
{
    p.validate();
    const std::size_t width = am.ny();
    if (p.motor_width() > width) throw ContractViolation(p.name + " needs a 4-channel motor field");
    for (std::size_t k = 0; k < p.commands.size(); ++k) {
        const std::size_t slot = base_slot + k;
        if (slot >= am.config().capacity) {
            throw field::CapacityError(fmt::format("{} does not fit at slot {}", p.name, base_slot));
        }
        if (am.slots()[slot].occupied) {
            throw field::CapacityError(fmt::format("slot {} already holds an association", slot));
        }
    }
    for (std::size_t k = 0; k < p.commands.size(); ++k) {
        const auto& c = p.commands[k];
        am.store_slot(base_slot + k, SymbolVector{c.in_read, c.in_state}, c.motor().to_vector(width),
                      0.0);
    }
}

TmProgram parse_program(std::string_view text, std::string name)
{
    TmProgram p;
    p.name = std::move(name);
    std::size_t line_no = 0;
    for (const auto& raw : split_on(text, '\n')) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) {
            throw ParseError(fmt::format("line {}: expected 'read,state -> state,move,write'", line_no));
        }
        const auto in = split_on(trim(line.substr(0, arrow)), ',');
        const auto out = split_on(trim(line.substr(arrow + 2)), ',');
        if (in.size() != 2 || (out.size() != 3 && out.size() != 4)) {
            throw ParseError(fmt::format("line {}: wrong number of symbols", line_no));
        }
        TmCommand c;
        try {
            c.in_read = Symbol::parse(trim(in[0]));
            c.in_state = Symbol::parse(trim(in[1]));
            c.out_state = Symbol::parse(trim(out[0]));
            c.out_move = Symbol::parse(trim(out[1]));
            c.out_write = Symbol::parse(trim(out[2]));
            if (out.size() == 4) c.out_eye = Symbol::parse(trim(out[3]));
            world::move_of(c.out_move);
        } catch (const std::exception& e) {
            throw ParseError(fmt::format("line {}: {}", line_no, e.what()));
        }
        p.commands.push_back(std::move(c));
    }
    if (p.commands.empty()) throw ParseError("program has no commands");
    p.start_state = p.commands.front().in_state;
    return p;
}

std::string format_program(const TmProgram& p)
{
    const bool eye = p.motor_width() == 4;
    std::string out;
    for (const auto& c : p.commands) {
        out += fmt::format("{},{} -> {},{},{}", c.in_read.render(), c.in_state.render(),
                           c.out_state.render(), c.out_move.render(), c.out_write.render());
        if (eye) out += "," + c.out_eye.render();
        out += '\n';
    }
    return out;
}

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::halted: return "halted";
    case Outcome::starved: return "starved";
    case Outcome::step_limit: return "step-limit";
    case Outcome::boundary: return "boundary";
    }
    return "step-limit";
}

RunResult run_until_halt(Robot& r, long max_steps, const RunHooks& hooks)
{
    RunResult res;
    while (res.steps < max_steps) {
        if (hooks.before_step) hooks.before_step(r);
        std::optional<MotorCommand> teacher;
        if (r.am().config().select_source == OutputSource::teacher) {
            if (!hooks.teacher) throw ContractViolation("AM in teacher mode needs a teacher hook");
            teacher = hooks.teacher(r);
        }
        res.trace.push_back(r.macro_step(teacher));
        ++res.steps;
        if (r.starvation() != robot::Starvation::none) {
            res.outcome = Outcome::starved;
            break;
        }
        if (r.world().boundary_hit()) {
            res.outcome = Outcome::boundary;
            break;
        }
        if (r.halted()) {
            res.outcome = Outcome::halted;
            res.halt_symbol = res.trace.back().command.write_symbol;
            break;
        }
    }
    res.final_tape = world::format_tape_literal(r.world());
    return res;
}

void initialise_state(Robot& r, const Symbol& state)
{
    const OutputSource previous = r.am().config().select_source;
    r.set_am_source(OutputSource::teacher);
    r.init_step(MotorCommand{state, {}, {}, {}});
    r.set_am_source(previous);
}

void apply_modes(Robot& r, std::string_view modes)
{
    for (const auto& token : split_ws(modes)) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw ParseError("mode token needs key=value: '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "am-source") {
            r.set_am_source(field::parse_output_source(value));
        } else if (key == "as-source") {
            if (value == "tape") r.set_eye(true);
            else if (value == "memory") r.set_eye(false);
            else throw ParseError("as-source must be tape or memory");
        } else if (key == "eye") {
            if (value == "open") r.set_eye(true);
            else if (value == "closed") r.set_eye(false);
            else throw ParseError("eye must be open or closed");
        } else if (key == "am-learn") {
            r.am().set_learn_mode(field::parse_learn_mode(value));
        } else if (key == "as-learn") {
            r.as().set_learn_mode(field::parse_learn_mode(value));
        } else {
            throw ParseError("unknown mode key '" + key + "'");
        }
    }
}

std::vector<CurriculumItem> parse_curriculum(std::string_view text)
{
    std::vector<CurriculumItem> items;
    std::size_t line_no = 0;
    for (const auto& raw : split_on(text, '\n')) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto parts = split_on(line, '|');
        if (parts.size() != 4) {
            throw ParseError(fmt::format("line {}: expected 'tape | state | max-steps | modes'", line_no));
        }
        CurriculumItem item;
        item.tape = trim(parts[0]);
        world::parse_tape_literal(item.tape);
        item.start_state = Symbol::parse(trim(parts[1]));
        const std::string steps = trim(parts[2]);
        auto [ptr, ec] = std::from_chars(steps.data(), steps.data() + steps.size(), item.max_steps);
        if (ec != std::errc{} || ptr != steps.data() + steps.size() || item.max_steps <= 0) {
            throw ParseError(fmt::format("line {}: bad max-steps '{}'", line_no, steps));
        }
        item.modes = trim(parts[3]);
        items.push_back(std::move(item));
    }
    if (items.empty()) throw ParseError("curriculum is empty");
    return items;
}

std::vector<CurriculumItem> checker_curriculum()
{
    const std::string modes = "am-source=teacher am-learn=new as-source=tape";
    return {
        {"A(A@1", Symbol('0'), 100, modes},
        {"A)A@1", Symbol('0'), 100, modes},
        {"A()A@1", Symbol('0'), 100, modes},
    };
}

std::size_t teach_am(Robot& r, const TmProgram& teacher, const std::vector<CurriculumItem>& curriculum)
{
    teacher.validate();
    const std::size_t before = r.am().occupied_count();
    RunHooks hooks;
    hooks.teacher = [&](const Robot& bot) -> std::optional<MotorCommand> {
        if (!bot.eye_open()) throw TeachingError("teaching requires the eye open");
        const auto out = bot.world().read_outputs();
        const TmCommand* c = teacher.find(out.symbol_read_eye, out.symbol_uttered);
        if (!c) {
            throw TeachingError(fmt::format("{} has no command for ({},{})", teacher.name,
                                            out.symbol_read_eye.render(),
                                            out.symbol_uttered.render()));
        }
        return c->motor();
    };
    for (const auto& item : curriculum) {
        const world::TapeState loaded = world::parse_tape_literal(item.tape);
        for (std::size_t i = 0; i < world::kTapeLength; ++i) {
            r.world().edit_square(i, loaded.square(i));
        }
        r.world().set_scan(loaded.i_scan());
        apply_modes(r, item.modes);
        if (r.am().config().select_source != OutputSource::teacher) {
            throw TeachingError("teaching requires AM in teacher mode");
        }
        r.init_step(MotorCommand{item.start_state, {}, {}, {}});
        const RunResult res = run_until_halt(r, item.max_steps, hooks);
        if (res.outcome != Outcome::halted) {
            throw TeachingError(fmt::format("teaching run on {} ended with {}", item.tape,
                                            to_string(res.outcome)));
        }
    }
    return r.am().occupied_count() - before;
}

std::size_t train_as(Robot& r, const TrainOptions& opts)
{
    const std::vector<Symbol>& symbols = opts.symbols.empty() ? r.config().alphabet : opts.symbols;
    if (opts.squares == 0 || opts.squares >= world::kTapeLength) {
        throw ContractViolation("training square count out of range");
    }
    const std::size_t before = r.as().occupied_count();
    const OutputSource am_source = r.am().config().select_source;
    r.set_am_source(OutputSource::memory);
    r.set_eye(true);
    r.as().set_learn_mode(opts.learn_all ? LearnMode::all : LearnMode::novel);

    for (const auto& c : symbols) {
        for (std::size_t i = 0; i < opts.squares; ++i) r.world().edit_square(i, c);
        r.world().set_scan(0);
        initialise_state(r, Symbol('8'));
        const RunResult res = run_until_halt(r, static_cast<long>(2 * opts.squares));
        if (res.outcome != Outcome::step_limit) {
            throw TeachingError(fmt::format("scanner pass over '{}' ended with {}", c.render(),
                                            to_string(res.outcome)));
        }
    }
    r.set_am_source(am_source);
    return r.as().occupied_count() - before;
}

long checker_step_bound(std::size_t n)
{
    const long len = static_cast<long>(std::max<std::size_t>(n, 1));
    return 4 * len * len;
}

} // namespace erobot::programs
