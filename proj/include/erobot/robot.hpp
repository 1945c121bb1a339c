#pragma once

// The cognitive system: a motor field AM ("processor") and a sensory
// working-memory field AS ("memory") wired to the tape world through the
// eye switch NS1 and the teacher/memory multiplexer NM.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "erobot/field.hpp"
#include "erobot/rng.hpp"
#include "erobot/symbol.hpp"
#include "erobot/world.hpp"

namespace erobot::robot {

inline const Symbol kHalt{'H'};

struct RobotConfig {
    field::FieldConfig am_cfg;
    field::FieldConfig as_cfg;
    std::size_t motor_width = 3;
    std::vector<Symbol> states;   ///< internal alphabet, includes 'H'
    std::vector<Symbol> alphabet; ///< external (tape) alphabet

    /// AM unbiased in memory mode, AS with bm = 0.5 and tau = 50 reading the tape,
    /// both with learning off; tape alphabet {A ( ) X T F}.
    static RobotConfig standard(std::size_t motor_width = 3);
    void validate() const;
};

enum class Starvation { none, sensory, motor };

std::string_view to_string(Starvation s);
Starvation parse_starvation(std::string_view text);

/// Eye open passes the eye through, eye closed passes the working-memory prediction.
Symbol ns1_select(bool eye_open, const Symbol& symbol_read_eye, const Symbol& as_prediction);

class Robot {
public:
    explicit Robot(RobotConfig cfg, std::uint64_t seed = 0);

    const RobotConfig& config() const { return cfg_; }
    field::AssociativeField& am() { return am_; }
    const field::AssociativeField& am() const { return am_; }
    field::AssociativeField& as() { return as_; }
    const field::AssociativeField& as() const { return as_; }
    world::TapeState& world() { return world_; }
    const world::TapeState& world() const { return world_; }
    world::History& history() { return history_; }
    const world::History& history() const { return history_; }
    SessionRng& rng() { return rng_; }
    const SessionRng& rng() const { return rng_; }

    bool eye_open() const { return eye_open_; }
    long time() const { return v_; }
    bool halted() const { return halted_; }
    Starvation starvation() const { return starvation_; }
    bool stopped() const { return halted_ || starvation_ != Starvation::none; }

    /// One AS cycle confirming (position_written, symbol_written). Skipped for a blank write.
    void as_write_microcycle(std::size_t position_written, const Symbol& symbol_written);
    /// One blank-data AS probe at the scanned square. Returns the field output's
    /// symbol: the eye symbol while the eye is open, the retrieved one otherwise.
    Symbol as_read_microcycle(std::size_t scanned_square, const Symbol& symbol_read_eye);

    /// One full robot step. `teacher` must be present iff AM is in teacher mode.
    world::HistoryRow macro_step(const std::optional<world::MotorCommand>& teacher = std::nullopt);

    /// Latches the delayed registers from the teacher entries; the tape, the
    /// clock, the history and both LTMs are untouched. Clears the halt and
    /// starvation diagnostics. AM must be in teacher mode.
    void init_step(const world::MotorCommand& teacher);

    void set_eye(bool open);
    void set_am_source(field::OutputSource s);
    /// Teacher means the tape; memory means the eye is closed.
    void set_as_source(field::OutputSource s);
    void set_learn_modes(field::LearnMode am, field::LearnMode as);
    void set_tau(double tau);

    /// Restores clock and diagnostics from a snapshot.
    void restore_status(long v, bool halted, Starvation starvation);

private:
    RobotConfig cfg_;
    field::AssociativeField am_;
    field::AssociativeField as_;
    world::TapeState world_;
    world::History history_;
    SessionRng rng_;
    bool eye_open_ = true;
    long v_ = 0;
    bool halted_ = false;
    Starvation starvation_ = Starvation::none;
};

} // namespace erobot::robot
