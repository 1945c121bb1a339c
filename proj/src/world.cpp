#include "erobot/world.hpp"

#include <charconv>

#include <fmt/format.h>

namespace erobot::world {

namespace {

constexpr std::string_view kSep = " \xE2\x9F\x82 "; // " ⟂ "
constexpr std::string_view kArrow = " \xE2\x86\x92 "; // " → "

std::size_t parse_index(std::string_view text, std::string_view what)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(fmt::format("bad {} '{}'", what, text));
    }
    return v;
}

std::vector<std::string_view> split_sv(std::string_view text, std::string_view sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + sep.size();
    }
    return out;
}

} // namespace

Move move_of(const Symbol& s)
{
    if (s.is_blank() || s.token() == "S") return Move::stay;
    if (s.token() == "L") return Move::left;
    if (s.token() == "R") return Move::right;
    throw ContractViolation("move must be L, S, R or blank, got '" + s.token() + "'");
}

SymbolVector MotorCommand::to_vector(std::size_t width) const
{
    if (width == 3) return {utter_symbol, move, write_symbol};
    if (width == 4) return {utter_symbol, move, write_symbol, eye_ctl};
    throw ContractViolation("motor width must be 3 or 4");
}

MotorCommand MotorCommand::from_vector(const SymbolVector& v)
{
    if (v.width() != 3 && v.width() != 4) throw ContractViolation("motor width must be 3 or 4");
    MotorCommand m{v[0], v[1], v[2], {}};
    if (v.width() == 4) m.eye_ctl = v[3];
    return m;
}

Outputs TapeState::read_outputs() const
{
    return Outputs{squares_[i_scan_], i_scan_, symbol_written_, symbol_uttered_, position_written_};
}

bool TapeState::apply(const MotorCommand& m)
{
    const Move move = move_of(m.move);
    symbol_uttered_ = m.utter_symbol;
    symbol_written_ = m.write_symbol;
    position_written_ = i_scan_;
    squares_[i_scan_] = m.write_symbol;
    bool clamped = false;
    if (move == Move::left) {
        if (i_scan_ == 0) clamped = true;
        else --i_scan_;
    } else if (move == Move::right) {
        if (i_scan_ + 1 == kTapeLength) clamped = true;
        else ++i_scan_;
    }
    boundary_hit_ = boundary_hit_ || clamped;
    return clamped;
}

void TapeState::edit_square(std::size_t index, const Symbol& symbol)
{
    if (index >= kTapeLength) throw ContractViolation("square index out of range");
    if (symbol.token().size() > 1) throw ContractViolation("tape squares hold single-character symbols");
    squares_[index] = symbol;
}

void TapeState::set_scan(std::size_t index)
{
    if (index >= kTapeLength) throw ContractViolation("scan index out of range");
    i_scan_ = index;
}

void TapeState::clear_tape()
{
    std::fill(squares_.begin(), squares_.end(), Symbol::blank());
}

void TapeState::latch(const Symbol& uttered, const Symbol& written)
{
    symbol_uttered_ = uttered;
    symbol_written_ = written;
}

void TapeState::set_position_written(std::size_t index)
{
    if (index >= kTapeLength) throw ContractViolation("position_written out of range");
    position_written_ = index;
}

TapeState parse_tape_literal(std::string_view literal)
{
    TapeState t;
    std::string_view body = literal;
    std::size_t scan = 0;
    if (auto at = literal.rfind('@'); at != std::string_view::npos) {
        body = literal.substr(0, at);
        scan = parse_index(literal.substr(at + 1), "scan position");
    }
    std::size_t square = 0;
    for (std::size_t i = 0; i < body.size();) {
        if (square >= kTapeLength) throw ParseError("tape literal longer than the tape");
        if (body.substr(i, kBlankGlyph.size()) == kBlankGlyph) {
            i += kBlankGlyph.size();
        } else {
            const char c = body[i];
            if (static_cast<unsigned char>(c) >= 0x80 || c == ' ' || c == ',' || c == '|') {
                throw ParseError(fmt::format("unsupported tape character at offset {}", i));
            }
            t.edit_square(square, Symbol(c));
            ++i;
        }
        ++square;
    }
    if (scan >= kTapeLength) throw ParseError("scan position beyond the tape");
    t.set_scan(scan);
    return t;
}

std::string format_tape_literal(const TapeState& t)
{
    std::size_t end = t.i_scan() + 1;
    for (std::size_t i = kTapeLength; i-- > 0;) {
        if (!t.square(i).is_blank()) {
            end = std::max(end, i + 1);
            break;
        }
    }
    std::string out;
    for (std::size_t i = 0; i < end; ++i) out += t.square(i).render();
    out += fmt::format("@{}", t.i_scan());
    return out;
}

std::string format_row(const HistoryRow& row)
{
    std::string cmd = fmt::format("{},{},{}", row.command.utter_symbol.render(),
                                  row.command.move.render(), row.command.write_symbol.render());
    if (row.motor_width == 4) cmd += "," + row.command.eye_ctl.render();
    std::string flags;
    for (const auto& f : row.flags) {
        if (!flags.empty()) flags += ' ';
        flags += f;
    }
    if (flags.empty()) flags = "-";
    return fmt::format("{}{}{},{}{}{}{}{}{}{}", row.step, kSep, row.read.render(),
                       row.uttered.render(), kArrow, cmd, kSep, row.tape, kSep, flags);
}

HistoryRow parse_row(std::string_view line)
{
    const auto fields = split_sv(line, kSep);
    if (fields.size() != 4) throw ParseError(fmt::format("trace row needs 4 fields: '{}'", line));
    HistoryRow row;
    long step = 0;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), step);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
        throw ParseError(fmt::format("bad trace step '{}'", fields[0]));
    }
    row.step = step;

    const auto io = split_sv(fields[1], kArrow);
    if (io.size() != 2) throw ParseError("trace row command is missing the arrow");
    const auto in = split_on(io[0], ',');
    const auto out = split_on(io[1], ',');
    if (in.size() != 2) throw ParseError("trace row input needs read,uttered");
    if (out.size() != 3 && out.size() != 4) throw ParseError("trace row output needs 3 or 4 symbols");
    row.read = Symbol::parse(in[0]);
    row.uttered = Symbol::parse(in[1]);
    row.motor_width = out.size();
    row.command.utter_symbol = Symbol::parse(out[0]);
    row.command.move = Symbol::parse(out[1]);
    row.command.write_symbol = Symbol::parse(out[2]);
    if (out.size() == 4) row.command.eye_ctl = Symbol::parse(out[3]);

    row.tape = std::string(fields[2]);
    parse_tape_literal(row.tape); // validates
    if (fields[3] != "-") row.flags = split_ws(fields[3]);
    return row;
}

void History::push(HistoryRow row)
{
    rows_.push_back(std::move(row));
    while (rows_.size() > kHistoryDepth) rows_.pop_front();
}

} // namespace erobot::world
