#pragma once

// External system: a finite tape, the eye/hand position, and the
// one-step-delayed proprioceptive registers.

#include <cstddef>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "erobot/symbol.hpp"

namespace erobot::world {

inline constexpr std::size_t kTapeLength = 1000;
inline constexpr std::size_t kHistoryDepth = 199;

enum class Move { left, stay, right };

/// Blank and 'S' both mean stay. Anything else is a contract violation.
Move move_of(const Symbol& s);

/// Output of the motor nucleus. `eye_ctl` is '1' (close), '0' (open) or blank (keep).
struct MotorCommand {
    Symbol utter_symbol;
    Symbol move;
    Symbol write_symbol;
    Symbol eye_ctl;

    /// Packs into a motor vector of width 3 (no eye channel) or 4.
    SymbolVector to_vector(std::size_t width) const;
    static MotorCommand from_vector(const SymbolVector& v);

    friend bool operator==(const MotorCommand&, const MotorCommand&) = default;
};

struct Outputs {
    Symbol symbol_read_eye;
    std::size_t scanned_square_position = 0;
    Symbol symbol_written;
    Symbol symbol_uttered;
    std::size_t position_written = 0;
};

class TapeState {
public:
    TapeState() : squares_(kTapeLength) {}

    Outputs read_outputs() const;
    /// Latches the delayed registers, writes the scanned square, then moves.
    /// Returns true when the move was clamped at a tape end.
    bool apply(const MotorCommand& m);

    void edit_square(std::size_t index, const Symbol& symbol);
    void set_scan(std::size_t index);
    void clear_tape();
    /// Sets the delayed registers directly (initialisation).
    void latch(const Symbol& uttered, const Symbol& written);
    void set_position_written(std::size_t index);

    const Symbol& square(std::size_t index) const { return squares_.at(index); }
    std::size_t i_scan() const { return i_scan_; }
    std::size_t position_written() const { return position_written_; }
    const Symbol& symbol_written() const { return symbol_written_; }
    const Symbol& symbol_uttered() const { return symbol_uttered_; }
    bool boundary_hit() const { return boundary_hit_; }
    void set_boundary_hit(bool hit) { boundary_hit_ = hit; }

    friend bool operator==(const TapeState&, const TapeState&) = default;

private:
    std::vector<Symbol> squares_;
    std::size_t i_scan_ = 0;
    std::size_t position_written_ = 0;
    Symbol symbol_written_;
    Symbol symbol_uttered_;
    bool boundary_hit_ = false;
};

/// "A(()())A@1": one character per square, the blank glyph for blank squares,
/// and an optional "@k" suffix placing the scanned square. Squares after the
/// literal are blank.
TapeState parse_tape_literal(std::string_view literal);
/// Squares up to the last non-blank one (or the scanned square, if further),
/// always with the "@k" suffix.
std::string format_tape_literal(const TapeState& t);

struct HistoryRow {
    long step = 0;
    Symbol read;     ///< symbol AM received
    Symbol uttered;  ///< state AM received
    MotorCommand command;
    std::size_t motor_width = 3;
    std::string tape; ///< tape literal after the step
    std::vector<std::string> flags;

    friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

/// `step ⟂ read,uttered → utter,move,write[,eye] ⟂ tape-literal ⟂ flags`
std::string format_row(const HistoryRow& row);
HistoryRow parse_row(std::string_view line);

/// Bounded window of the most recent rows (oldest evicted first).
class History {
public:
    void push(HistoryRow row);
    void clear() { rows_.clear(); }
    const std::deque<HistoryRow>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    friend bool operator==(const History&, const History&) = default;

private:
    std::deque<HistoryRow> rows_;
};

} // namespace erobot::world
