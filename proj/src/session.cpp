#include "erobot/session.hpp"

#include <charconv>
#include <map>
#include <set>

#include <fmt/format.h>

namespace erobot::session {

using field::AssociativeField;
using field::FieldConfig;
using robot::Robot;
using robot::RobotConfig;

namespace {

std::string real(double v) { return fmt::format("{}", v); }

std::string join_symbols(const std::vector<Symbol>& v)
{
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ' ';
        out += s.render();
    }
    return out;
}

void write_field(std::string& out, std::string_view name, const AssociativeField& f)
{
    const FieldConfig& c = f.config();
    out += fmt::format("[{}]\n", name);
    out += fmt::format("nx={}\nny={}\ncapacity={}\n", f.nx(), f.ny(), c.capacity);
    out += fmt::format("bm={}\nba={}\ntau={}\nx_inh={}\nnovelty_threshold={}\n", real(c.bm),
                       real(c.ba), real(c.tau), real(c.x_inh), real(c.novelty_threshold));
    out += fmt::format("learn_mode={}\nselect_source={}\n", field::to_string(c.learn_mode),
                       field::to_string(c.select_source));
    out += fmt::format("[{}.ltm]\n", name);
    out += f.dump(true);
}

// Sections in file order with their 1-based line numbers for diagnostics.
struct Section {
    std::size_t line = 0;
    std::vector<std::pair<std::size_t, std::string>> body;
};

class KeyValues {
public:
    KeyValues(std::string name, const Section& s) : name_(std::move(name))
    {
        for (const auto& [line_no, line] : s.body) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ParseError(fmt::format("line {}: expected key=value in [{}]", line_no, name_));
            }
            const std::string key = line.substr(0, eq);
            if (!values_.emplace(key, std::pair{line_no, line.substr(eq + 1)}).second) {
                throw ParseError(fmt::format("line {}: duplicate key '{}'", line_no, key));
            }
        }
    }

    std::string text(const std::string& key)
    {
        auto it = values_.find(key);
        if (it == values_.end()) throw ParseError(fmt::format("[{}] is missing '{}'", name_, key));
        used_.insert(key);
        return it->second.second;
    }

    template <class T>
    T number(const std::string& key)
    {
        const std::string v = text(key);
        T out{};
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
            throw ParseError(fmt::format("line {}: bad value for '{}': '{}'", values_.at(key).first,
                                         key, v));
        }
        return out;
    }

    bool flag(const std::string& key)
    {
        const std::string v = text(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw ParseError(fmt::format("line {}: '{}' must be true or false", values_.at(key).first, key));
    }

    Symbol symbol(const std::string& key)
    {
        try {
            return Symbol::parse(text(key));
        } catch (const ContractViolation& e) {
            throw ParseError(fmt::format("line {}: {}", values_.at(key).first, e.what()));
        }
    }

    std::vector<Symbol> symbols(const std::string& key)
    {
        std::vector<Symbol> out;
        for (const auto& t : split_ws(text(key))) out.push_back(Symbol::parse(t));
        return out;
    }

    void check_all_used() const
    {
        for (const auto& [key, v] : values_) {
            if (!used_.contains(key)) {
                throw ParseError(fmt::format("line {}: unknown key '{}' in [{}]", v.first, key, name_));
            }
        }
    }

private:
    std::string name_;
    std::map<std::string, std::pair<std::size_t, std::string>> values_;
    std::set<std::string> used_;
};

struct FieldShape {
    std::size_t nx = 0;
    std::size_t ny = 0;
    FieldConfig cfg;
};

FieldShape read_field(KeyValues kv)
{
    FieldShape f;
    f.nx = kv.number<std::size_t>("nx");
    f.ny = kv.number<std::size_t>("ny");
    f.cfg.capacity = kv.number<std::size_t>("capacity");
    f.cfg.bm = kv.number<double>("bm");
    f.cfg.ba = kv.number<double>("ba");
    f.cfg.tau = kv.number<double>("tau");
    f.cfg.x_inh = kv.number<double>("x_inh");
    f.cfg.novelty_threshold = kv.number<double>("novelty_threshold");
    f.cfg.learn_mode = field::parse_learn_mode(kv.text("learn_mode"));
    f.cfg.select_source = field::parse_output_source(kv.text("select_source"));
    kv.check_all_used();
    return f;
}

void load_ltm(AssociativeField& f, const Section& s)
{
    for (const auto& [line_no, line] : s.body) {
        try {
            const field::LtmRow row = field::parse_ltm_row(line, f.nx(), f.ny());
            if (row.index >= f.config().capacity) throw ParseError("slot index beyond capacity");
            f.store_slot(row.index, row.gx, row.gy, row.e);
        } catch (const std::exception& e) {
            throw ParseError(fmt::format("line {}: {}", line_no, e.what()));
        }
    }
}

} // namespace

std::string save_project(const Robot& r)
{
    const auto& w = r.world();
    std::string out;
    out += fmt::format("[project]\nversion={}\n", kProjectVersion);
    out += fmt::format("[rng]\nseed={}\ndraws={}\n", r.rng().seed(), r.rng().draws());
    out += "[robot]\n";
    out += fmt::format("time={}\neye_open={}\nhalted={}\nstarvation={}\n", r.time(), r.eye_open(),
                       r.halted(), robot::to_string(r.starvation()));
    out += fmt::format("motor_width={}\nstates={}\nalphabet={}\n", r.config().motor_width,
                       join_symbols(r.config().states), join_symbols(r.config().alphabet));
    out += "[world]\n";
    out += fmt::format("tape={}\nposition_written={}\nsymbol_written={}\nsymbol_uttered={}\n",
                       world::format_tape_literal(w), w.position_written(),
                       w.symbol_written().render(), w.symbol_uttered().render());
    out += fmt::format("boundary={}\n", w.boundary_hit());
    write_field(out, "am", r.am());
    write_field(out, "as", r.as());
    out += "[history]\n";
    for (const auto& row : r.history().rows()) out += world::format_row(row) + '\n';
    return out;
}

Robot load_project(std::string_view text)
{
    std::map<std::string, Section> sections;
    std::vector<std::string> order;
    Section* current = nullptr;
    std::size_t line_no = 0;
    for (const auto& raw : split_on(text, '\n')) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            const std::string name = line.substr(1, line.size() - 2);
            if (sections.contains(name)) {
                throw ParseError(fmt::format("line {}: duplicate section [{}]", line_no, name));
            }
            current = &sections[name];
            current->line = line_no;
            order.push_back(name);
            continue;
        }
        if (!current) throw ParseError(fmt::format("line {}: content before the first section", line_no));
        current->body.emplace_back(line_no, line);
    }
    const std::vector<std::string> expected = {"project", "rng",    "robot",  "world", "am",
                                               "am.ltm",  "as",     "as.ltm", "history"};
    if (order != expected) {
        throw ParseError(fmt::format("project sections must be, in order: [{}]",
                                     fmt::join(expected, "] [")));
    }

    KeyValues project("project", sections["project"]);
    const int version = project.number<int>("version");
    if (version != kProjectVersion) {
        throw ParseError(fmt::format("project version {} is not supported (expected {})", version,
                                     kProjectVersion));
    }
    project.check_all_used();

    KeyValues rng("rng", sections["rng"]);
    const auto seed = rng.number<std::uint64_t>("seed");
    const auto draws = rng.number<std::uint64_t>("draws");
    rng.check_all_used();

    KeyValues rb("robot", sections["robot"]);
    const long time = rb.number<long>("time");
    const bool eye_open = rb.flag("eye_open");
    const bool halted = rb.flag("halted");
    const auto starvation = robot::parse_starvation(rb.text("starvation"));

    const FieldShape am = read_field(KeyValues("am", sections["am"]));
    const FieldShape as = read_field(KeyValues("as", sections["as"]));
    RobotConfig cfg;
    cfg.am_cfg = am.cfg;
    cfg.as_cfg = as.cfg;
    cfg.motor_width = rb.number<std::size_t>("motor_width");
    cfg.states = rb.symbols("states");
    cfg.alphabet = rb.symbols("alphabet");
    rb.check_all_used();
    if (am.nx != 2 || am.ny != cfg.motor_width || as.nx != 2 || as.ny != 1) {
        throw ParseError("field widths do not match the robot wiring");
    }

    Robot r = [&] {
        try {
            return Robot(cfg, seed);
        } catch (const ContractViolation& e) {
            throw ParseError(std::string("invalid robot configuration: ") + e.what());
        }
    }();
    r.rng().restore(seed, draws);
    load_ltm(r.am(), sections["am.ltm"]);
    load_ltm(r.as(), sections["as.ltm"]);

    KeyValues wd("world", sections["world"]);
    const world::TapeState tape = world::parse_tape_literal(wd.text("tape"));
    for (std::size_t i = 0; i < world::kTapeLength; ++i) r.world().edit_square(i, tape.square(i));
    r.world().set_scan(tape.i_scan());
    const auto position_written = wd.number<std::size_t>("position_written");
    if (position_written >= world::kTapeLength) throw ParseError("position_written beyond the tape");
    r.world().latch(wd.symbol("symbol_uttered"), wd.symbol("symbol_written"));
    r.world().set_position_written(position_written);
    r.world().set_boundary_hit(wd.flag("boundary"));
    wd.check_all_used();

    r.set_eye(eye_open);
    r.restore_status(time, halted, starvation);

    long last_step = 0;
    for (const auto& [hl, line] : sections["history"].body) {
        world::HistoryRow row;
        try {
            row = world::parse_row(line);
        } catch (const std::exception& e) {
            throw ParseError(fmt::format("line {}: {}", hl, e.what()));
        }
        if (row.step <= last_step && last_step != 0) {
            throw ParseError(fmt::format("line {}: history steps must increase", hl));
        }
        last_step = row.step;
        r.history().push(std::move(row));
    }
    return r;
}

std::string TraceLog::render() const
{
    std::string out;
    for (const auto& row : rows) out += world::format_row(row) + '\n';
    for (const auto& d : diagnostics) out += "# " + d + '\n';
    return out;
}

TraceLog replay(std::string_view project, long steps)
{
    Robot r = load_project(project);
    TraceLog log;
    if (r.am().config().select_source == field::OutputSource::teacher) {
        log.diagnostics.push_back("AM is in teacher mode; nothing to replay without a teacher");
        return log;
    }
    for (long k = 0; k < steps; ++k) {
        if (r.stopped()) {
            log.diagnostics.push_back(r.halted() ? "halted"
                                                 : fmt::format("starved ({})", robot::to_string(r.starvation())));
            break;
        }
        try {
            log.rows.push_back(r.macro_step());
        } catch (const field::CapacityError& e) {
            log.diagnostics.push_back(fmt::format("capacity: {}", e.what()));
            break;
        }
        if (r.world().boundary_hit()) {
            log.diagnostics.push_back("boundary");
            break;
        }
    }
    return log;
}

std::optional<TraceDivergence> trace_diff(const TraceLog& a, const TraceLog& b)
{
    const std::size_t n = std::min(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(a.rows[i] == b.rows[i])) {
            return TraceDivergence{i, world::format_row(a.rows[i]), world::format_row(b.rows[i])};
        }
    }
    if (a.rows.size() == b.rows.size()) return std::nullopt;
    TraceDivergence d;
    d.index = n;
    if (n < a.rows.size()) d.a = world::format_row(a.rows[n]);
    if (n < b.rows.size()) d.b = world::format_row(b.rows[n]);
    return d;
}

} // namespace erobot::session
