#include "erobot/robot.hpp"

namespace erobot::robot {

using field::LearnMode;
using field::OutputSource;
using world::HistoryRow;
using world::MotorCommand;

RobotConfig RobotConfig::standard(std::size_t motor_width)
{
    RobotConfig cfg;
    cfg.am_cfg.bm = 0.0;
    cfg.am_cfg.ba = 0.0;
    cfg.am_cfg.learn_mode = LearnMode::none;
    cfg.am_cfg.select_source = OutputSource::memory;
    cfg.as_cfg.bm = 0.5;
    cfg.as_cfg.ba = 0.0;
    cfg.as_cfg.tau = 50.0;
    cfg.as_cfg.learn_mode = LearnMode::none;
    cfg.as_cfg.select_source = OutputSource::teacher;
    cfg.motor_width = motor_width;
    for (char c : std::string_view("01234589H")) cfg.states.emplace_back(c);
    for (char c : std::string_view("A()XTF")) cfg.alphabet.emplace_back(c);
    return cfg;
}

void RobotConfig::validate() const
{
    am_cfg.validate();
    as_cfg.validate();
    if (am_cfg.bm != 0.0 || am_cfg.ba != 0.0) throw ContractViolation("AM must be unbiased");
    if (motor_width != 3 && motor_width != 4) throw ContractViolation("motor width must be 3 or 4");
}

std::string_view to_string(Starvation s)
{
    switch (s) {
    case Starvation::none: return "none";
    case Starvation::sensory: return "sensory";
    case Starvation::motor: return "motor";
    }
    return "none";
}

Starvation parse_starvation(std::string_view text)
{
    if (text == "none") return Starvation::none;
    if (text == "sensory") return Starvation::sensory;
    if (text == "motor") return Starvation::motor;
    throw ParseError("unknown starvation kind '" + std::string(text) + "'");
}

Symbol ns1_select(bool eye_open, const Symbol& symbol_read_eye, const Symbol& as_prediction)
{
    return eye_open ? symbol_read_eye : as_prediction;
}

Robot::Robot(RobotConfig cfg, std::uint64_t seed)
    : cfg_((cfg.validate(), std::move(cfg))),
      am_(2, cfg_.motor_width, cfg_.am_cfg),
      as_(2, 1, cfg_.as_cfg),
      rng_(seed)
{
    eye_open_ = cfg_.as_cfg.select_source == OutputSource::teacher;
}

void Robot::as_write_microcycle(std::size_t position_written, const Symbol& symbol_written)
{
    if (symbol_written.is_blank()) return;
    const SymbolVector x{position_token(position_written), symbol_written};
    std::optional<SymbolVector> yt;
    if (eye_open_) yt = SymbolVector{symbol_written};
    as_.cycle(x, yt, rng_);
}

Symbol Robot::as_read_microcycle(std::size_t scanned_square, const Symbol& symbol_read_eye)
{
    const SymbolVector x{position_token(scanned_square), Symbol::blank()};
    std::optional<SymbolVector> yt;
    if (eye_open_) yt = SymbolVector{symbol_read_eye};
    return as_.cycle(x, yt, rng_, /*allow_learning=*/false).y[0];
}

HistoryRow Robot::macro_step(const std::optional<MotorCommand>& teacher)
{
    if (stopped()) throw ContractViolation("robot is stopped; re-initialise before stepping");
    const bool teacher_mode = am_.config().select_source == OutputSource::teacher;
    if (teacher_mode != teacher.has_value()) {
        throw ContractViolation(teacher_mode ? "AM is in teacher mode but no teacher command was given"
                                             : "AM is in memory mode; teacher command not accepted");
    }

    const world::Outputs out = world_.read_outputs();
    as_write_microcycle(out.position_written, out.symbol_written);
    const Symbol prediction = as_read_microcycle(out.scanned_square_position, out.symbol_read_eye);
    const Symbol read = ns1_select(eye_open_, out.symbol_read_eye, prediction);

    HistoryRow row;
    row.step = v_ + 1;
    row.read = read;
    row.uttered = out.symbol_uttered;
    row.motor_width = cfg_.motor_width;
    row.flags.emplace_back(eye_open_ ? "eye:open" : "eye:closed");

    auto finish = [&](HistoryRow& r) {
        r.tape = world::format_tape_literal(world_);
        ++v_;
        history_.push(r);
        return r;
    };

    if (!eye_open_ && read.is_blank()) {
        starvation_ = Starvation::sensory;
        row.flags.emplace_back("starved:as");
        return finish(row);
    }

    std::optional<SymbolVector> yt;
    if (teacher) yt = teacher->to_vector(cfg_.motor_width);
    const field::CycleResult am_out = am_.cycle(SymbolVector{read, out.symbol_uttered}, yt, rng_);
    if (!teacher_mode && !am_out.retrieved) {
        starvation_ = Starvation::motor;
        row.flags.emplace_back("starved:am");
        return finish(row);
    }

    const MotorCommand motor = MotorCommand::from_vector(am_out.y);
    row.command = motor;
    if (!motor.eye_ctl.is_blank()) {
        if (motor.eye_ctl.token() == "1") {
            set_eye(false);
            row.flags.emplace_back("eye-close");
        } else if (motor.eye_ctl.token() == "0") {
            set_eye(true);
            row.flags.emplace_back("eye-open");
        } else {
            throw ContractViolation("eye channel must be '0', '1' or blank");
        }
    }
    if (world_.apply(motor)) row.flags.emplace_back("boundary");
    if (motor.utter_symbol == kHalt) {
        halted_ = true;
        row.flags.emplace_back("halt");
    }
    return finish(row);
}

void Robot::init_step(const MotorCommand& teacher)
{
    if (am_.config().select_source != OutputSource::teacher) {
        throw ContractViolation("init requires AM in teacher mode");
    }
    world_.latch(teacher.utter_symbol, teacher.write_symbol);
    halted_ = false;
    starvation_ = Starvation::none;
    world_.set_boundary_hit(false);
}

void Robot::set_eye(bool open)
{
    eye_open_ = open;
    as_.set_select_source(open ? OutputSource::teacher : OutputSource::memory);
}

void Robot::set_am_source(OutputSource s)
{
    am_.set_select_source(s);
}

void Robot::set_as_source(OutputSource s)
{
    set_eye(s == OutputSource::teacher);
}

void Robot::set_learn_modes(LearnMode am, LearnMode as)
{
    am_.set_learn_mode(am);
    as_.set_learn_mode(as);
}

void Robot::set_tau(double tau)
{
    auto cfg = as_.config();
    cfg.tau = tau;
    as_.reconfigure(cfg);
}

void Robot::restore_status(long v, bool halted, Starvation starvation)
{
    v_ = v;
    halted_ = halted;
    starvation_ = starvation;
}

} // namespace erobot::robot
