#include "erobot/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace erobot::field {

namespace {

constexpr std::string_view kArrow = "\xE2\x86\x92"; // →

double parse_double(std::string_view text)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("bad number '" + std::string(text) + "'");
    }
    return v;
}

} // namespace

std::string_view to_string(LearnMode m)
{
    switch (m) {
    case LearnMode::all: return "all";
    case LearnMode::novel: return "new";
    case LearnMode::none: return "none";
    }
    return "none";
}

std::string_view to_string(OutputSource s)
{
    return s == OutputSource::teacher ? "teacher" : "memory";
}

LearnMode parse_learn_mode(std::string_view text)
{
    if (text == "all") return LearnMode::all;
    if (text == "new") return LearnMode::novel;
    if (text == "none") return LearnMode::none;
    throw ParseError("unknown learn mode '" + std::string(text) + "'");
}

OutputSource parse_output_source(std::string_view text)
{
    if (text == "teacher") return OutputSource::teacher;
    if (text == "memory") return OutputSource::memory;
    throw ParseError("unknown output source '" + std::string(text) + "'");
}

void FieldConfig::validate() const
{
    if (capacity == 0) throw ContractViolation("field capacity must be positive");
    if (!(bm >= 0.0) || !(ba >= 0.0)) throw ContractViolation("bias coefficients must be >= 0");
    if (!(tau > 1.0)) throw ContractViolation("tau must be > 1");
    if (!(x_inh >= 0.0)) throw ContractViolation("x_inh must be >= 0");
    if (!(novelty_threshold > 0.0 && novelty_threshold <= 1.0)) {
        throw ContractViolation("novelty threshold must lie in (0, 1]");
    }
}

double similarity(const SymbolVector& x, const SymbolVector& g)
{
    if (x.width() != g.width()) {
        throw ContractViolation(
            fmt::format("similarity over widths {} and {}", x.width(), g.width()));
    }
    std::size_t signals = 0;
    std::size_t matches = 0;
    for (std::size_t j = 0; j < x.width(); ++j) {
        if (x[j].is_blank()) continue;
        ++signals;
        if (x[j] == g[j]) ++matches;
    }
    return signals == 0 ? 0.0 : static_cast<double>(matches) / static_cast<double>(signals);
}

Choice choose(std::span<const double> se, SessionRng& rng)
{
    if (se.empty()) throw ContractViolation("choose over an empty front");
    const double best = *std::max_element(se.begin(), se.end());
    Choice c;
    for (std::size_t i = 0; i < se.size(); ++i) {
        if (se[i] == best) c.maxset.push_back(i);
    }
    c.i_read = c.maxset[rng.uniform_index(c.maxset.size())];
    return c;
}

DecodingCheck check_correct_decoding(std::span<const SymbolVector> inputs)
{
    for (const auto& a : inputs) {
        const double self = similarity(a, a);
        for (const auto& b : inputs) {
            if (a == b) continue;
            if (!(self > similarity(a, b))) {
                return {false, std::make_pair(a, b)};
            }
        }
    }
    return {};
}

AssociativeField::AssociativeField(std::size_t nx, std::size_t ny, FieldConfig cfg)
    : nx_(nx), ny_(ny), cfg_(cfg)
{
    if (nx == 0 || ny == 0) throw ContractViolation("field widths must be positive");
    cfg_.validate();
    slots_.assign(cfg_.capacity, LtmSlot{SymbolVector(nx_), SymbolVector(ny_), 0.0, false});
    s_.assign(cfg_.capacity, 0.0);
    se_.assign(cfg_.capacity, 0.0);
}

void AssociativeField::reconfigure(const FieldConfig& cfg)
{
    cfg.validate();
    if (cfg.capacity != cfg_.capacity) throw ContractViolation("field capacity is fixed");
    cfg_ = cfg;
}

std::size_t AssociativeField::occupied_count() const
{
    return static_cast<std::size_t>(
        std::count_if(slots_.begin(), slots_.end(), [](const LtmSlot& s) { return s.occupied; }));
}

std::vector<double> AssociativeField::decode(const SymbolVector& x) const
{
    if (x.width() != nx_) throw ContractViolation("input width does not match the field");
    std::vector<double> s(cfg_.capacity, 0.0);
    for (std::size_t i = 0; i < extent_; ++i) {
        if (slots_[i].occupied) s[i] = similarity(x, slots_[i].gx);
    }
    return s;
}

std::vector<double> AssociativeField::bias(std::span<const double> s) const
{
    if (s.size() != cfg_.capacity) throw ContractViolation("front size does not match capacity");
    std::vector<double> se(s.begin(), s.end());
    if (cfg_.bm == 0.0 && cfg_.ba == 0.0) return se;
    for (std::size_t i = 0; i < se.size(); ++i) {
        const double e = slots_[i].e;
        se[i] = s[i] * (1.0 + cfg_.bm * e) + cfg_.ba * e;
    }
    return se;
}

SymbolVector AssociativeField::encode(std::size_t i_read, std::span<const double> se) const
{
    if (i_read >= cfg_.capacity) throw ContractViolation("i_read out of range");
    if (se[i_read] > cfg_.x_inh) return slots_[i_read].gy;
    return SymbolVector(ny_);
}

bool AssociativeField::detect_novelty(const SymbolVector& x) const
{
    double best = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < extent_; ++i) {
        if (!slots_[i].occupied) continue;
        const double s = similarity(x, slots_[i].gx);
        best = any ? std::max(best, s) : s;
        any = true;
    }
    return !any || best < cfg_.novelty_threshold;
}

void AssociativeField::update_e(std::size_t i_read, double se_winner, bool x_is_new)
{
    const double keep = 1.0 - 1.0 / cfg_.tau;
    for (std::size_t i = 0; i < extent_; ++i) slots_[i].e *= keep;
    if (!x_is_new && se_winner > cfg_.x_inh) slots_.at(i_read).e = 1.0;
}

bool AssociativeField::learn(const SymbolVector& x, const SymbolVector& y, bool x_is_new)
{
    const bool enabled = cfg_.learn_mode == LearnMode::all ||
                         (cfg_.learn_mode == LearnMode::novel && x_is_new);
    if (!enabled) return false;
    if (x.width() != nx_ || y.width() != ny_) {
        throw ContractViolation("association widths do not match the field");
    }
    const std::size_t slot = first_empty_slot();
    if (slot == cfg_.capacity) {
        throw CapacityError(fmt::format("LTM full ({} slots)", cfg_.capacity));
    }
    slots_[slot] = LtmSlot{x, y, 1.0, true};
    extent_ = std::max(extent_, slot + 1);
    return true;
}

CycleResult AssociativeField::cycle(const SymbolVector& x, const std::optional<SymbolVector>& yt,
                                    SessionRng& rng, bool allow_learning)
{
    if (cfg_.select_source == OutputSource::teacher && !yt) {
        throw ContractViolation("teacher mode requires a teacher output");
    }
    if (yt && yt->width() != ny_) throw ContractViolation("teacher output width mismatch");

    s_ = decode(x);
    se_ = bias(s_);
    Choice choice = choose(se_, rng);

    CycleResult r;
    r.i_read = choice.i_read;
    r.maxset_size = choice.maxset.size();
    r.ym = encode(choice.i_read, se_);
    r.retrieved = se_[choice.i_read] > cfg_.x_inh;
    r.y = cfg_.select_source == OutputSource::teacher ? *yt : r.ym;
    r.x_is_new = detect_novelty(x);
    update_e(choice.i_read, se_[choice.i_read], r.x_is_new);
    if (allow_learning) r.recorded = learn(x, r.y, r.x_is_new);

    last_i_read_ = choice.i_read;
    last_maxset_ = std::move(choice.maxset);
    return r;
}

void AssociativeField::edit_slot(std::size_t index, SlotPart part, std::size_t position,
                                 const Symbol& symbol)
{
    if (index >= cfg_.capacity) throw ContractViolation("slot index out of range");
    LtmSlot& slot = slots_[index];
    SymbolVector& target = part == SlotPart::input ? slot.gx : slot.gy;
    if (position >= target.width()) throw ContractViolation("slot position out of range");
    target.set(position, symbol);
    slot.occupied = !slot.gx.is_null() || !slot.gy.is_null();
    if (!slot.occupied) slot.e = 0.0;
    refresh_extent();
}

void AssociativeField::erase_slot(std::size_t index)
{
    if (index >= cfg_.capacity) throw ContractViolation("slot index out of range");
    slots_[index] = LtmSlot{SymbolVector(nx_), SymbolVector(ny_), 0.0, false};
    refresh_extent();
}

void AssociativeField::clear_all()
{
    for (auto& slot : slots_) slot = LtmSlot{SymbolVector(nx_), SymbolVector(ny_), 0.0, false};
    extent_ = 0;
    clear_fronts();
}

void AssociativeField::clear_fronts()
{
    std::fill(s_.begin(), s_.end(), 0.0);
    std::fill(se_.begin(), se_.end(), 0.0);
    for (auto& slot : slots_) slot.e = 0.0;
    last_i_read_.reset();
    last_maxset_.clear();
}

void AssociativeField::store_slot(std::size_t index, SymbolVector gx, SymbolVector gy, double e)
{
    if (index >= cfg_.capacity) throw CapacityError("slot index beyond capacity");
    if (gx.width() != nx_ || gy.width() != ny_) throw ContractViolation("slot widths mismatch");
    if (!(e >= 0.0 && e <= 1.0)) throw ContractViolation("E-state outside [0, 1]");
    slots_[index] = LtmSlot{std::move(gx), std::move(gy), e, true};
    extent_ = std::max(extent_, index + 1);
}

std::string AssociativeField::dump(bool full_precision) const
{
    std::string out;
    for (std::size_t i = 0; i < extent_; ++i) {
        const LtmSlot& slot = slots_[i];
        if (!slot.occupied) continue;
        out += fmt::format("{} {} {} {} {}\n", i, slot.gx.render(), kArrow, slot.gy.render(),
                           format_e(slot.e, full_precision));
    }
    return out;
}

std::size_t AssociativeField::first_empty_slot() const
{
    for (std::size_t i = 0; i < cfg_.capacity; ++i) {
        if (!slots_[i].occupied) return i;
    }
    return cfg_.capacity;
}

void AssociativeField::refresh_extent()
{
    extent_ = 0;
    for (std::size_t i = cfg_.capacity; i-- > 0;) {
        if (slots_[i].occupied) {
            extent_ = i + 1;
            break;
        }
    }
}

std::string format_e(double e, bool full_precision)
{
    return full_precision ? fmt::format("{}", e) : fmt::format("{:.6f}", e);
}

LtmRow parse_ltm_row(std::string_view line, std::size_t nx, std::size_t ny)
{
    const auto parts = split_ws(line);
    if (parts.size() != nx + ny + 3) {
        throw ParseError(fmt::format("LTM row needs {} fields, got {}: '{}'", nx + ny + 3,
                                     parts.size(), line));
    }
    if (parts[nx + 1] != kArrow) throw ParseError("LTM row is missing the arrow");
    LtmRow row;
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), idx);
    if (ec != std::errc{} || ptr != parts[0].data() + parts[0].size()) {
        throw ParseError("bad LTM slot index '" + parts[0] + "'");
    }
    row.index = idx;
    std::vector<Symbol> gx, gy;
    for (std::size_t j = 0; j < nx; ++j) gx.push_back(Symbol::parse(parts[1 + j]));
    for (std::size_t j = 0; j < ny; ++j) gy.push_back(Symbol::parse(parts[nx + 2 + j]));
    row.gx = SymbolVector(std::move(gx));
    row.gy = SymbolVector(std::move(gy));
    row.e = parse_double(parts.back());
    if (!(row.e >= 0.0 && row.e <= 1.0)) throw ParseError("E-state outside [0, 1]");
    return row;
}

} // namespace erobot::field
