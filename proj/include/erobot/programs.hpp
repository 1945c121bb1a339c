#pragma once

// Turing-machine command tables, teaching and training curricula, the run
// harness, and the reference oracle used to examine the robot.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erobot/field.hpp"
#include "erobot/robot.hpp"
#include "erobot/symbol.hpp"
#include "erobot/world.hpp"

namespace erobot::programs {

struct TmCommand {
    Symbol in_read;
    Symbol in_state;
    Symbol out_state;
    Symbol out_move;
    Symbol out_write;
    Symbol out_eye; ///< blank unless the program drives the eye channel

    world::MotorCommand motor() const { return {out_state, out_move, out_write, out_eye}; }
    friend bool operator==(const TmCommand&, const TmCommand&) = default;
};

struct TmProgram {
    std::string name;
    Symbol start_state;
    std::vector<TmCommand> commands;

    const TmCommand* find(const Symbol& read, const Symbol& state) const;
    /// 4 when any command drives the eye channel, else 3.
    std::size_t motor_width() const;
    /// Deterministic (unique input pairs) and no commands out of the halt state.
    void validate() const;
};

/// Counter oracle: 'T' iff the counter never goes negative and ends at zero.
char balance_oracle(std::string_view expr);

/// Parentheses checker over {A ( ) X T F}, states {0 1 2 H}, started in state
/// '0' on square 1 of "A<expr>A". Halts writing 'T' or 'F' at the head.
TmProgram build_checker();
/// States '8' (rewrite, stay, go to '9') and '9' (rewrite, move right, go to '8').
TmProgram build_rewriting_scanner();
/// From state '3' on square 1: sweep right to the right 'A', sweep left to the
/// left 'A', step onto square 1 uttering '0'.
TmProgram build_scan_then_check();

/// Copy of `p` with each command's eye channel set to `eye_for(command)`.
TmProgram with_eye_control(TmProgram p,
                           const std::function<Symbol(const TmCommand&)>& eye_for);

/// Stores each command as gx = (read, state), gy = (state, move, write[, eye])
/// starting at `base_slot`. Throws CapacityError when a target slot is taken
/// or beyond capacity.
void load_program(field::AssociativeField& am, const TmProgram& p, std::size_t base_slot);

/// `read,state -> state,move,write[,eye]`, one command per line; '#' comments.
TmProgram parse_program(std::string_view text, std::string name = "program");
std::string format_program(const TmProgram& p);

enum class Outcome { halted, starved, step_limit, boundary };
std::string_view to_string(Outcome o);

struct RunResult {
    Outcome outcome = Outcome::step_limit;
    Symbol halt_symbol;
    long steps = 0;
    std::string final_tape;
    std::vector<world::HistoryRow> trace;
};

struct RunHooks {
    /// Called before every step (human actions such as opening/closing the eye).
    std::function<void(robot::Robot&)> before_step;
    /// Teacher motor output for teacher-mode steps.
    std::function<std::optional<world::MotorCommand>(const robot::Robot&)> teacher;
};

/// Steps until halt, starvation, boundary clamp, or `max_steps`.
RunResult run_until_halt(robot::Robot& r, long max_steps, const RunHooks& hooks = {});

/// Puts the robot in state `state` the way a user does: teacher mode, utter
/// entry, Init, then back to the previous AM source.
void initialise_state(robot::Robot& r, const Symbol& state);

struct CurriculumItem {
    std::string tape;
    Symbol start_state;
    long max_steps = 0;
    std::string modes; ///< e.g. "am-learn=new as-source=tape"
};

std::vector<CurriculumItem> parse_curriculum(std::string_view text);
/// Applies "key=value" mode tokens: am-source, as-source, am-learn, as-learn, eye.
void apply_modes(robot::Robot& r, std::string_view modes);

class TeachingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The three demonstration tapes for the checker.
std::vector<CurriculumItem> checker_curriculum();

/// Drives AM in teacher / learn-new mode with `teacher` supplying each motor
/// output. Returns the number of AM slots recorded.
std::size_t teach_am(robot::Robot& r, const TmProgram& teacher,
                     const std::vector<CurriculumItem>& curriculum);

struct TrainOptions {
    std::size_t squares = 10;
    bool learn_all = false;
    /// Symbols to train; empty means the robot's whole external alphabet.
    std::vector<Symbol> symbols;
};

/// For every symbol: fill squares 0..squares-1 with it, start the rewriting
/// scanner in state '8' at square 0, and run it across the squares with AS
/// reading the tape. The scanner must already be in AM. Returns AS slots recorded.
std::size_t train_as(robot::Robot& r, const TrainOptions& opts = {});

/// Step bound for one checker run on an expression of length n: 4·max(1, n)².
long checker_step_bound(std::size_t n);

} // namespace erobot::programs
