// Command-line driver: runs every experiment headlessly.
//
// Exit codes: 0 ok, 1 mismatch or error, 2 starved, 3 step limit,
// 4 boundary, 5 LTM capacity exhausted.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "erobot/field.hpp"
#include "erobot/neuro.hpp"
#include "erobot/programs.hpp"
#include "erobot/robot.hpp"
#include "erobot/scenarios.hpp"
#include "erobot/session.hpp"

namespace {

using namespace erobot;
using programs::Outcome;

enum Exit { kOk = 0, kMismatch = 1, kStarved = 2, kStepLimit = 3, kBoundary = 4, kCapacity = 5 };

int exit_for(Outcome o)
{
    switch (o) {
    case Outcome::halted: return kOk;
    case Outcome::starved: return kStarved;
    case Outcome::step_limit: return kStepLimit;
    case Outcome::boundary: return kBoundary;
    }
    return kMismatch;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

robot::Robot robot_from(int example, const std::string& project, std::uint64_t seed)
{
    if (!project.empty()) return session::load_project(read_file(project));
    if (example > 0) return scenarios::make_example(example, seed);
    throw CLI::ValidationError("--example or --project is required");
}

void print_run_tail(const programs::RunResult& r)
{
    if (r.outcome == Outcome::halted) {
        fmt::print("outcome: halted {}\n", r.halt_symbol.render());
    } else {
        fmt::print("outcome: {}\n", programs::to_string(r.outcome));
    }
    fmt::print("tape: {}\n", r.final_tape);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Associative-field robot workbench (command-line driver)"};
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed of the session generator")->capture_default_str();

    auto* example = app.add_subcommand("example", "set up and run Example N (1-5)");
    int example_n = 0;
    std::string save_to;
    example->add_option("n", example_n)->required()->check(CLI::Range(1, 5));
    bool setup_only = false;
    example->add_option("--save-project", save_to, "write the final project snapshot here");
    example->add_flag("--setup-only", setup_only, "save the example as set up, before any step");

    auto* run = app.add_subcommand("run", "load a project and step it");
    std::string project_path;
    long steps = 0;
    std::optional<std::uint64_t> run_seed;
    run->add_option("--project", project_path)->required();
    run->add_option("--steps", steps)->required()->check(CLI::PositiveNumber);
    run->add_option("--seed", run_seed, "restart the generator stream with this seed");
    run->add_option("--save-project", save_to);

    auto* teach = app.add_subcommand("teach-checker", "teach the checker by demonstration");
    auto* train = app.add_subcommand("train-as", "train the sensory field with the scanner");
    bool learn_all = false;
    train->add_flag("--learn-all", learn_all, "record every write instead of new ones only");

    auto* exam = app.add_subcommand("exam", "check one expression against the counter oracle");
    std::string expr;
    bool mental = false;
    bool show_trace = false;
    exam->add_option("--expr", expr, "parentheses expression without delimiters")->required();
    exam->add_flag("--mental", mental, "scan with the eye open, then check with it closed");
    exam->add_flag("--trace", show_trace, "print every step");

    auto* dump = app.add_subcommand("dump-ltm", "print an LTM table");
    std::string which = "am";
    int source_example = 0;
    bool full = false;
    dump->add_option("--field", which)->check(CLI::IsMember({"am", "as"}));
    dump->add_option("--example", source_example)->check(CLI::Range(1, 5));
    dump->add_option("--project", project_path);
    dump->add_flag("--full-precision", full);

    auto* trace = app.add_subcommand("trace", "write the full trace of a run");
    std::string out_path;
    long trace_steps = 1000;
    trace->add_option("--out", out_path)->required();
    trace->add_option("--example", source_example)->check(CLI::Range(1, 5));
    trace->add_option("--project", project_path);
    trace->add_option("--steps", trace_steps)->check(CLI::PositiveNumber);

    auto* ann0 = app.add_subcommand("ann0", "continuous winner-take-all network experiments");
    ann0->require_subcommand(1);
    auto* wta = ann0->add_subcommand("wta", "one competition on a random similarity front");
    std::size_t n2 = 8;
    double beta = 1.5;
    double noise = 0.0;
    std::string variant = "a";
    std::string csv;
    wta->add_option("--n2", n2)->check(CLI::Range(1, 4096));
    wta->add_option("--beta", beta);
    wta->add_option("--noise", noise);
    wta->add_option("--variant", variant)->check(CLI::IsMember({"a", "b"}));
    wta->add_option("--csv", csv, "write the (t, u, r) trajectory here");
    auto* pla = ann0->add_subcommand("pla", "programmable logic array mode on random tables");
    std::size_t m = 3;
    std::size_t outputs = 2;
    int tables = 10;
    pla->add_option("--m", m)->check(CLI::Range(1, 8));
    pla->add_option("--outputs", outputs)->check(CLI::Range(1, 16));
    pla->add_option("--tables", tables)->check(CLI::PositiveNumber);
    auto* equiv = ann0->add_subcommand("equiv", "tie statistics of the network against the look-up table");
    int trials = 1000;
    equiv->add_option("--trials", trials)->check(CLI::PositiveNumber);
    equiv->add_option("--noise", noise);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kMismatch;
    }

    try {
        if (*example) {
            robot::Robot r = scenarios::make_example(example_n, seed);
            if (setup_only) {
                if (save_to.empty()) throw CLI::ValidationError("--setup-only needs --save-project");
                write_file(save_to, session::save_project(r));
                fmt::print("example {} set up: tape {}\n", example_n, world::format_tape_literal(r.world()));
                return kOk;
            }
            const auto rep = scenarios::run_example(example_n, r);
            for (const auto& line : rep.lines) fmt::print("{}\n", line);
            if (!save_to.empty()) write_file(save_to, session::save_project(r));
            if (!rep.agrees) return kMismatch;
            return exit_for(rep.run.outcome);
        }
        if (*run) {
            robot::Robot r = session::load_project(read_file(project_path));
            if (run_seed) r.rng().restore(*run_seed, 0);
            const auto res = programs::run_until_halt(r, steps);
            for (const auto& row : res.trace) fmt::print("{}\n", world::format_row(row));
            print_run_tail(res);
            if (!save_to.empty()) write_file(save_to, session::save_project(r));
            return exit_for(res.outcome);
        }
        if (*teach) {
            robot::Robot r(robot::RobotConfig::standard(3), seed);
            const std::size_t n =
                programs::teach_am(r, programs::build_checker(), programs::checker_curriculum());
            fmt::print("{} commands recorded\n", n);
            fmt::print("{}", r.am().dump());
            return n == 12 ? kOk : kMismatch;
        }
        if (*train) {
            robot::Robot r(robot::RobotConfig::standard(3), seed);
            programs::load_program(r.am(), programs::build_rewriting_scanner(), 0);
            programs::TrainOptions opts;
            opts.learn_all = learn_all;
            const std::size_t n = programs::train_as(r, opts);
            fmt::print("{} slots recorded\n", n);
            fmt::print("{}", r.as().dump());
            return kOk;
        }
        if (*exam) {
            scenarios::ExamOptions opts;
            opts.mental = mental;
            opts.seed = seed;
            const auto res = scenarios::exam(expr, opts);
            if (show_trace) {
                for (const auto& row : res.run.trace) fmt::print("{}\n", world::format_row(row));
            }
            if (res.verdict == '?') {
                fmt::print(stderr, "no verdict: {} after {} steps\n", programs::to_string(res.run.outcome),
                           res.run.steps);
                return exit_for(res.run.outcome);
            }
            fmt::print("{}\n", res.verdict);
            return res.agrees ? kOk : kMismatch;
        }
        if (*dump) {
            const robot::Robot r = robot_from(source_example, project_path, seed);
            fmt::print("{}", which == "am" ? r.am().dump(full) : r.as().dump(full));
            return kOk;
        }
        if (*trace) {
            session::TraceLog log;
            if (!project_path.empty()) {
                log = session::replay(read_file(project_path), trace_steps);
            } else if (source_example > 0) {
                robot::Robot r = scenarios::make_example(source_example, seed);
                auto rep = scenarios::run_example(source_example, r);
                log.rows = std::move(rep.run.trace);
                log.diagnostics.push_back(std::string(programs::to_string(rep.run.outcome)));
            } else {
                throw CLI::ValidationError("--example or --project is required");
            }
            write_file(out_path, log.render());
            fmt::print("{} rows written to {}\n", log.rows.size(), out_path);
            return kOk;
        }
        if (*wta) {
            neuro::Ann0Params p;
            p.n1 = p.n2 = n2;
            p.beta = p.alpha = beta;
            p.noise_amp = noise;
            p.variant = variant == "a" ? neuro::WtaVariant::inhibit_others
                                       : neuro::WtaVariant::inhibit_all_excite_self;
            SessionRng rng(seed);
            neuro::Ann0State st = neuro::Ann0State::zeros(p);
            std::vector<double> x(n2);
            for (std::size_t i = 0; i < n2; ++i) {
                st.gx(i, i) = 1.0;
                x[i] = rng.uniform_real(0.0, 1.0);
            }
            std::size_t argmax = 0;
            for (std::size_t i = 1; i < n2; ++i) {
                if (x[i] > x[argmax]) argmax = i;
            }
            neuro::Trajectory traj;
            const auto res = neuro::run_wta_cycle(st, x, p, rng, csv.empty() ? nullptr : &traj);
            if (!csv.empty()) {
                std::ofstream out(csv);
                traj.write_csv(out);
            }
            fmt::print("argmax s: {} ({:.6f})\n", argmax, x[argmax]);
            fmt::print("winner: {}\n", res.winner ? fmt::format("{}", *res.winner) : std::string("none"));
            fmt::print("converged: {} after {} steps (t = {:.3f})\n", res.converged, res.steps,
                       res.settle_time);
            if (!res.diagnostic.empty()) fmt::print("diagnostic: {}\n", res.diagnostic);
            return res.winner == argmax || noise > 0.0 ? kOk : kMismatch;
        }
        if (*pla) {
            SessionRng rng(seed);
            int failures = 0;
            for (int k = 0; k < tables; ++k) {
                const auto table = neuro::TruthTable::random(m, outputs, rng);
                neuro::Ann0Params p;
                const auto rep = neuro::pla_mode_check(table, p, rng);
                fmt::print("table {}: {}\n", k, rep.ok ? "reproduced" : "MISMATCH");
                if (!rep.ok) ++failures;
            }
            return failures == 0 ? kOk : kMismatch;
        }
        if (*equiv) {
            const std::vector<neuro::Association> program = {
                {{Symbol('a'), Symbol('b')}, {Symbol('p')}},
                {{Symbol('a'), Symbol('c')}, {Symbol('q')}},
                {{Symbol('d'), Symbol('b')}, {Symbol('r')}},
            };
            const std::vector<std::vector<Symbol>> alphabets = {{Symbol('a'), Symbol('d')},
                                                                {Symbol('b'), Symbol('c')}};
            const std::vector<SymbolVector> probes = {{Symbol('a'), Symbol()}, {Symbol(), Symbol('b')},
                                                      {Symbol('a'), Symbol('b')}};
            neuro::Ann0Params p;
            p.noise_amp = noise > 0.0 ? noise : 0.05;
            const auto rep = neuro::ann0_vs_af0_equivalence(program, alphabets, probes, trials, p, seed);
            fmt::print("{}", rep.render());
            return rep.agree ? kOk : kMismatch;
        }
    } catch (const field::CapacityError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kCapacity;
    } catch (const CLI::Error& e) {
        return app.exit(e) == 0 ? kOk : kMismatch;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kMismatch;
    }
    return kMismatch;
}
