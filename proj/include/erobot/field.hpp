#pragma once

// Associative field: a content-addressable LTM with decaying residual
// excitation (E-states). With bm = ba = 0 the E-states never influence
// retrieval and the field behaves as a plain programmable look-up table.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erobot/rng.hpp"
#include "erobot/symbol.hpp"

namespace erobot::field {

enum class LearnMode { all, novel, none };
enum class OutputSource { teacher, memory };
enum class SlotPart { input, output };

std::string_view to_string(LearnMode m);
std::string_view to_string(OutputSource s);
LearnMode parse_learn_mode(std::string_view text);
OutputSource parse_output_source(std::string_view text);

/// No free slot is left for a recording.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FieldConfig {
    std::size_t capacity = 1000;
    double bm = 0.0;                ///< multiplicative bias
    double ba = 0.0;                ///< additive bias
    double tau = 50.0;              ///< E-state decay time constant, in cycles
    double x_inh = 0.0;             ///< retrieval fires only when se[i_read] > x_inh
    double novelty_threshold = 1.0; ///< x is new when max similarity falls below this
    LearnMode learn_mode = LearnMode::none;
    OutputSource select_source = OutputSource::memory;

    void validate() const;
};

struct LtmSlot {
    SymbolVector gx;
    SymbolVector gy;
    double e = 0.0;
    bool occupied = false;
};

/// Fraction of non-blank components of x that equal the matching component of g.
/// Zero when x is all-blank. Throws ContractViolation on width mismatch.
double similarity(const SymbolVector& x, const SymbolVector& g);

struct Choice {
    std::size_t i_read = 0;
    std::vector<std::size_t> maxset;
};

/// Argmax set of the front and a uniform draw from it. A single-member
/// maxset consumes no randomness.
Choice choose(std::span<const double> se, SessionRng& rng);

struct DecodingCheck {
    bool ok = true;
    /// (a, b) with similarity(a, b) >= similarity(a, a).
    std::optional<std::pair<SymbolVector, SymbolVector>> witness;
};

/// Checks f(a,a) > f(a,b) for every ordered pair of distinct inputs.
DecodingCheck check_correct_decoding(std::span<const SymbolVector> inputs);

struct CycleResult {
    SymbolVector y;  ///< selected output (teacher or memory)
    SymbolVector ym; ///< memory readout, NULL when retrieval did not fire
    std::size_t i_read = 0;
    std::size_t maxset_size = 0;
    bool retrieved = false;
    bool x_is_new = false;
    bool recorded = false;
};

class AssociativeField {
public:
    AssociativeField(std::size_t nx, std::size_t ny, FieldConfig cfg = {});

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    const FieldConfig& config() const { return cfg_; }
    /// Replaces the configuration; capacity must stay the same.
    void reconfigure(const FieldConfig& cfg);
    void set_learn_mode(LearnMode m) { cfg_.learn_mode = m; }
    void set_select_source(OutputSource s) { cfg_.select_source = s; }

    const std::vector<LtmSlot>& slots() const { return slots_; }
    std::span<const double> s() const { return s_; }
    std::span<const double> se() const { return se_; }
    std::optional<std::size_t> last_i_read() const { return last_i_read_; }
    const std::vector<std::size_t>& last_maxset() const { return last_maxset_; }
    std::size_t occupied_count() const;

    // Individual stages of one cycle, exposed for inspection and tests.
    std::vector<double> decode(const SymbolVector& x) const;
    std::vector<double> bias(std::span<const double> s) const;
    SymbolVector encode(std::size_t i_read, std::span<const double> se) const;
    bool detect_novelty(const SymbolVector& x) const;
    /// Decay every E-state, then excite the winner of a successful, non-novel retrieval.
    void update_e(std::size_t i_read, double se_winner, bool x_is_new);
    /// Records (x, y) into the first empty slot when the learn mode allows it.
    bool learn(const SymbolVector& x, const SymbolVector& y, bool x_is_new);

    /// decode -> bias -> choose -> encode -> output select -> novelty -> E update -> learn.
    /// `allow_learning = false` runs a probe cycle that never records.
    CycleResult cycle(const SymbolVector& x, const std::optional<SymbolVector>& yt, SessionRng& rng,
                      bool allow_learning = true);

    void edit_slot(std::size_t index, SlotPart part, std::size_t position, const Symbol& symbol);
    void erase_slot(std::size_t index);
    void clear_all();
    void clear_fronts();
    /// Writes a slot verbatim (project loading and program preloading).
    void store_slot(std::size_t index, SymbolVector gx, SymbolVector gy, double e);

    /// One line per occupied slot: `index gx... → gy... e`.
    std::string dump(bool full_precision = false) const;

private:
    std::size_t first_empty_slot() const;
    void refresh_extent();

    std::size_t nx_;
    std::size_t ny_;
    FieldConfig cfg_;
    std::vector<LtmSlot> slots_;
    std::vector<double> s_;
    std::vector<double> se_;
    std::optional<std::size_t> last_i_read_;
    std::vector<std::size_t> last_maxset_;
    std::size_t extent_ = 0; // one past the highest occupied slot
};

/// Renders an E-state value: fixed 6 decimals, or the shortest round-trip form.
std::string format_e(double e, bool full_precision);

struct LtmRow {
    std::size_t index = 0;
    SymbolVector gx;
    SymbolVector gy;
    double e = 0.0;
};

/// Parses one dump line for a field of the given widths.
LtmRow parse_ltm_row(std::string_view line, std::size_t nx, std::size_t ny);

} // namespace erobot::field
