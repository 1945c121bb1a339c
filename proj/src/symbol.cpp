#include "erobot/symbol.hpp"

#include <algorithm>
#include <cctype>

namespace erobot {

namespace {

constexpr std::string_view kReservedGlyphs[] = {
    kBlankGlyph,
    "\xE2\x86\x92", // →
    "\xE2\x9F\x82", // ⟂
    "->",
};

bool valid_token(std::string_view t)
{
    for (char c : t) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '|') {
            return false;
        }
    }
    return std::none_of(std::begin(kReservedGlyphs), std::end(kReservedGlyphs),
                        [&](std::string_view g) { return t.find(g) != std::string_view::npos; });
}

} // namespace

Symbol::Symbol(std::string token) : token_(std::move(token))
{
    if (!valid_token(token_)) {
        throw ContractViolation("invalid symbol token '" + token_ + "'");
    }
}

Symbol Symbol::parse(std::string_view text)
{
    if (text.empty() || text == kBlankGlyph) {
        return blank();
    }
    try {
        return Symbol(std::string(text));
    } catch (const ContractViolation& e) {
        throw ParseError(e.what());
    }
}

std::string Symbol::render() const
{
    return is_blank() ? std::string(kBlankGlyph) : token_;
}

Symbol position_token(std::size_t index)
{
    return Symbol("@" + std::to_string(index));
}

bool SymbolVector::is_null() const
{
    return std::all_of(items_.begin(), items_.end(), [](const Symbol& s) { return s.is_blank(); });
}

std::string SymbolVector::render() const
{
    std::string out;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ' ';
        out += items_[i].render();
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) out.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split_on(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view text)
{
    auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(b, e - b + 1));
}

} // namespace erobot
