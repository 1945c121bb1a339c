#pragma once

// Atomic symbols and fixed-width symbol vectors shared by every field,
// the tape, and the program tables.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace erobot {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised by every text parser (tape literals, program files, projects, requests).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rendering of the blank symbol in every text format.
inline constexpr std::string_view kBlankGlyph = "\xC2\xB7"; // U+00B7 '·'

/// An atomic token. The empty token is the blank, which means "no signal".
/// Tokens never contain whitespace, commas, or the reserved glyphs used by
/// the text formats.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string token);
    Symbol(char c) : Symbol(std::string(1, c)) {}

    static Symbol blank() { return {}; }
    /// Parses a rendered token: the blank glyph (or an empty string) is blank.
    static Symbol parse(std::string_view text);

    bool is_blank() const { return token_.empty(); }
    const std::string& token() const { return token_; }
    /// Token, or the blank glyph.
    std::string render() const;

    friend bool operator==(const Symbol&, const Symbol&) = default;

private:
    std::string token_;
};

/// Square address as it enters the sensory field ("@17"); compared only for equality.
Symbol position_token(std::size_t index);

/// Fixed-width tuple of symbols. Width is set at construction and never changes.
class SymbolVector {
public:
    SymbolVector() = default;
    explicit SymbolVector(std::size_t width) : items_(width) {}
    SymbolVector(std::initializer_list<Symbol> items) : items_(items) {}
    explicit SymbolVector(std::vector<Symbol> items) : items_(std::move(items)) {}

    std::size_t width() const { return items_.size(); }
    const Symbol& operator[](std::size_t i) const { return items_.at(i); }
    void set(std::size_t i, Symbol s) { items_.at(i) = std::move(s); }

    /// True when every component is blank.
    bool is_null() const;
    std::span<const Symbol> items() const { return items_; }

    /// Space-separated rendering with blanks as the blank glyph.
    std::string render() const;

    friend bool operator==(const SymbolVector&, const SymbolVector&) = default;

private:
    std::vector<Symbol> items_;
};

/// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_ws(std::string_view text);
/// Splits on a single character, keeping empty pieces.
std::vector<std::string> split_on(std::string_view text, char sep);
std::string trim(std::string_view text);

} // namespace erobot

template <>
struct std::hash<erobot::Symbol> {
    std::size_t operator()(const erobot::Symbol& s) const noexcept
    {
        return std::hash<std::string>{}(s.token());
    }
};
