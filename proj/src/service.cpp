#include "erobot/service.hpp"

#include <nlohmann/json.hpp>
#include <fmt/format.h>

#include "erobot/robot.hpp"
#include "erobot/scenarios.hpp"
#include "erobot/session.hpp"

namespace erobot::service {

using json = nlohmann::json;
using field::LearnMode;
using field::OutputSource;
using robot::Robot;
using world::MotorCommand;

namespace {

/// A rejected request: `kind` is one of "malformed", "unknown-session",
/// "unknown-verb", "mode", "illegal", "stopped", "capacity".
struct Rejection {
    std::string kind;
    std::string message;
};

[[noreturn]] void reject(std::string kind, std::string message)
{
    throw Rejection{std::move(kind), std::move(message)};
}

const json& arg(const json& args, const char* key)
{
    if (!args.is_object() || !args.contains(key)) reject("malformed", fmt::format("missing argument '{}'", key));
    return args.at(key);
}

std::string str_arg(const json& args, const char* key)
{
    const json& v = arg(args, key);
    if (!v.is_string()) reject("malformed", fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
}

std::size_t index_arg(const json& args, const char* key)
{
    const json& v = arg(args, key);
    if (!v.is_number_unsigned()) reject("malformed", fmt::format("'{}' must be a non-negative integer", key));
    return v.get<std::size_t>();
}

Symbol symbol_arg(const json& args, const char* key)
{
    try {
        return Symbol::parse(str_arg(args, key));
    } catch (const std::exception& e) {
        reject("malformed", e.what());
    }
}

json symbols_json(const SymbolVector& v)
{
    json out = json::array();
    for (const auto& s : v.items()) out.push_back(s.token());
    return out;
}

json field_json(const field::AssociativeField& f)
{
    json rows = json::array();
    const auto s = f.s();
    const auto se = f.se();
    for (std::size_t i = 0; i < f.slots().size(); ++i) {
        const auto& slot = f.slots()[i];
        if (!slot.occupied) continue;
        rows.push_back({{"index", i},
                        {"gx", symbols_json(slot.gx)},
                        {"gy", symbols_json(slot.gy)},
                        {"e", slot.e},
                        {"s", s[i]},
                        {"se", se[i]}});
    }
    json out{{"rows", rows},
             {"learn", field::to_string(f.config().learn_mode)},
             {"tau", f.config().tau},
             {"bm", f.config().bm},
             {"ba", f.config().ba}};
    out["i_read"] = f.last_i_read() ? json(*f.last_i_read()) : json(nullptr);
    return out;
}

LearnMode learn_value(const std::string& v)
{
    try {
        return field::parse_learn_mode(v);
    } catch (const std::exception& e) {
        reject("malformed", e.what());
    }
}

} // namespace

struct Service::Session {
    explicit Session(Robot r) : robot(std::move(r)) {}
    std::mutex mu;
    Robot robot;
    std::uint64_t version = 1;
    MotorCommand entry; ///< teacher-mode motor entries staged for the next step or init
    std::vector<std::string> messages;
};

Service::Service() = default;
Service::~Service() = default;

std::size_t Service::session_count() const
{
    std::lock_guard lock(mu_);
    return sessions_.size();
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const
{
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) reject("unknown-session", fmt::format("no session '{}'", id));
    return it->second;
}

namespace {

json state_json(const Robot& r, const MotorCommand& entry, const std::vector<std::string>& messages,
                const json& panes)
{
    auto want = [&](const char* pane) {
        if (panes.is_null()) return true;
        for (const auto& p : panes) {
            if (p == pane) return true;
        }
        return false;
    };
    json out{{"time", r.time()}};
    const auto& w = r.world();
    if (want("tape")) {
        out["tape"] = {{"literal", world::format_tape_literal(w)},
                       {"scan", w.i_scan()},
                       {"position_written", w.position_written()},
                       {"symbol_written", w.symbol_written().token()},
                       {"symbol_uttered", w.symbol_uttered().token()},
                       {"symbol_read_eye", w.read_outputs().symbol_read_eye.token()}};
    }
    if (want("history")) {
        json rows = json::array();
        for (const auto& row : r.history().rows()) rows.push_back(world::format_row(row));
        out["history"] = rows;
    }
    if (want("am")) out["am"] = field_json(r.am());
    if (want("as")) out["as"] = field_json(r.as());
    if (want("modes")) {
        out["modes"] = {{"am_source", field::to_string(r.am().config().select_source)},
                        {"as_source", r.eye_open() ? "tape" : "memory"},
                        {"am_learn", field::to_string(r.am().config().learn_mode)},
                        {"as_learn", field::to_string(r.as().config().learn_mode)},
                        {"motor_width", r.config().motor_width},
                        {"teacher_entry",
                         {{"utter", entry.utter_symbol.token()},
                          {"move", entry.move.token()},
                          {"write", entry.write_symbol.token()},
                          {"eye", entry.eye_ctl.token()}}}};
    }
    if (want("diagnostics")) {
        out["diagnostics"] = {{"halted", r.halted()},
                              {"starvation", robot::to_string(r.starvation())},
                              {"boundary", w.boundary_hit()},
                              {"messages", messages}};
    }
    return out;
}

} // namespace

std::string Service::handle(std::string_view request)
{
    json response;
    std::uint64_t version = 0;
    try {
        json req;
        try {
            req = json::parse(request);
        } catch (const json::parse_error& e) {
            reject("malformed", std::string("request is not JSON: ") + e.what());
        }
        if (!req.is_object()) reject("malformed", "request must be a JSON object");
        if (!req.contains("verb") || !req["verb"].is_string()) reject("malformed", "missing 'verb'");
        const std::string verb = req["verb"];
        const json args = req.value("args", json::object());
        if (!args.is_object()) reject("malformed", "'args' must be an object");

        if (verb == "new-session") {
            std::uint64_t seed = 0;
            if (args.contains("seed")) seed = index_arg(args, "seed");
            std::optional<Robot> r;
            if (args.contains("example") && !args["example"].is_null()) {
                const std::size_t n = index_arg(args, "example");
                if (n < 1 || n > 5) reject("illegal", "examples are numbered 1 to 5");
                r.emplace(scenarios::make_example(static_cast<int>(n), seed));
            } else {
                r.emplace(robot::RobotConfig::standard(3), seed);
            }
            std::lock_guard lock(mu_);
            const std::string id = fmt::format("s{}", next_id_++);
            sessions_.emplace(id, std::make_shared<Session>(std::move(*r)));
            version = 1;
            response = {{"ok", true}, {"version", version}, {"payload", {{"session", id}}}};
            return response.dump();
        }

        if (!req.contains("session") || !req["session"].is_string()) reject("malformed", "missing 'session'");
        const std::string id = req["session"];
        auto s = find(id);
        std::lock_guard lock(s->mu);
        Robot& r = s->robot;
        version = s->version;
        json payload = json::object();
        bool mutated = true;

        if (verb == "get-state") {
            payload = state_json(r, s->entry, s->messages, args.value("panes", json()));
            mutated = false;
        } else if (verb == "snapshot") {
            payload = {{"project", session::save_project(r)}};
            mutated = false;
        } else if (verb == "close-session") {
            std::lock_guard map_lock(mu_);
            sessions_.erase(id);
        } else if (verb == "step") {
            if (r.stopped()) reject("stopped", "the robot is stopped; use init to restart");
            std::optional<MotorCommand> teacher;
            if (r.am().config().select_source == OutputSource::teacher) teacher = s->entry;
            const world::HistoryRow row = r.macro_step(teacher);
            if (r.starvation() != robot::Starvation::none) {
                s->messages.push_back(fmt::format("step {}: {} starvation", row.step,
                                                  robot::to_string(r.starvation())));
            }
            if (r.world().boundary_hit()) {
                s->messages.push_back(fmt::format("step {}: head clamped at a tape end", row.step));
            }
            payload = {{"row", world::format_row(row)}, {"time", r.time()}};
        } else if (verb == "init") {
            if (r.am().config().select_source != OutputSource::teacher) {
                reject("mode", "init needs AM in teacher mode");
            }
            MotorCommand m;
            m.utter_symbol = symbol_arg(args, "utter");
            if (args.contains("write")) m.write_symbol = symbol_arg(args, "write");
            r.init_step(m);
            s->entry.utter_symbol = m.utter_symbol;
        } else if (verb == "set-mode") {
            const std::string target = str_arg(args, "target");
            if (target == "tau") {
                const json& v = arg(args, "value");
                if (!v.is_number()) reject("malformed", "tau must be a number");
                r.set_tau(v.get<double>());
            } else {
                const std::string value = str_arg(args, "value");
                if (target == "am-source") {
                    if (value == "teacher") r.set_am_source(OutputSource::teacher);
                    else if (value == "memory") r.set_am_source(OutputSource::memory);
                    else reject("malformed", "am-source is teacher or memory");
                } else if (target == "as-source") {
                    if (value == "tape") r.set_eye(true);
                    else if (value == "memory") r.set_eye(false);
                    else reject("malformed", "as-source is tape or memory");
                } else if (target == "am-learn") {
                    r.am().set_learn_mode(learn_value(value));
                } else if (target == "as-learn") {
                    r.as().set_learn_mode(learn_value(value));
                } else {
                    reject("malformed", fmt::format("unknown mode target '{}'", target));
                }
            }
        } else if (verb == "edit-tape") {
            r.world().edit_square(index_arg(args, "index"), symbol_arg(args, "symbol"));
        } else if (verb == "set-scan") {
            r.world().set_scan(index_arg(args, "index"));
        } else if (verb == "edit-slot") {
            const std::string which = str_arg(args, "field");
            if (which != "am" && which != "as") reject("malformed", "field is am or as");
            const std::string part = str_arg(args, "part");
            if (part != "input" && part != "output") reject("malformed", "part is input or output");
            auto& f = which == "am" ? r.am() : r.as();
            f.edit_slot(index_arg(args, "index"),
                        part == "input" ? field::SlotPart::input : field::SlotPart::output,
                        index_arg(args, "pos"), symbol_arg(args, "symbol"));
        } else if (verb == "clear") {
            const std::string what = str_arg(args, "what");
            if (what == "am") r.am().clear_all();
            else if (what == "as") r.as().clear_all();
            else if (what == "am-e") r.am().clear_fronts();
            else if (what == "as-e") r.as().clear_fronts();
            else if (what == "tape") r.world().clear_tape();
            else if (what == "history") r.history().clear();
            else reject("malformed", fmt::format("cannot clear '{}'", what));
        } else if (verb == "teacher-entry") {
            if (r.am().config().select_source != OutputSource::teacher) {
                reject("mode", "AM is in memory mode; motor entries are locked");
            }
            const std::string channel = str_arg(args, "channel");
            const Symbol symbol = symbol_arg(args, "symbol");
            if (channel == "utter") s->entry.utter_symbol = symbol;
            else if (channel == "move") s->entry.move = symbol;
            else if (channel == "write") s->entry.write_symbol = symbol;
            else if (channel == "eye" && r.config().motor_width == 4) s->entry.eye_ctl = symbol;
            else reject("illegal", fmt::format("no motor channel '{}'", channel));
        } else if (verb == "load-project") {
            Robot loaded = session::load_project(str_arg(args, "project"));
            r = std::move(loaded);
            s->entry = {};
            s->messages.clear();
        } else {
            reject("unknown-verb", fmt::format("unknown verb '{}'", verb));
        }
        if (mutated) version = ++s->version;
        response = {{"ok", true}, {"version", version}, {"payload", payload}};
    } catch (const Rejection& e) {
        response = {{"ok", false}, {"version", version}, {"error", {{"kind", e.kind}, {"message", e.message}}}};
    } catch (const field::CapacityError& e) {
        response = {{"ok", false}, {"version", version}, {"error", {{"kind", "capacity"}, {"message", e.what()}}}};
    } catch (const ParseError& e) {
        response = {{"ok", false}, {"version", version}, {"error", {{"kind", "malformed"}, {"message", e.what()}}}};
    } catch (const std::exception& e) {
        response = {{"ok", false}, {"version", version}, {"error", {{"kind", "illegal"}, {"message", e.what()}}}};
    }
    return response.dump();
}

} // namespace erobot::service
