#pragma once

// The five preset experiments and the examination harness built on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "erobot/programs.hpp"
#include "erobot/robot.hpp"

namespace erobot::scenarios {

inline constexpr std::size_t kCheckerSlot = 0;
inline constexpr std::size_t kSecondProgramSlot = 14;
/// Squares 0..kWorkingSquares-1 are the ones the sensory field is trained on.
inline constexpr std::size_t kWorkingSquares = 10;
inline constexpr const char* kDemoTape = "A(()())A@1";

/// Sensory LTM produced by the scanner curriculum (learn-new), e-values included.
std::vector<field::LtmRow> trained_as_rows();
void preload_trained_as(robot::Robot& r);

/// Checker with the eye channel toggled at several points of the algorithm.
programs::TmProgram build_eye_switching_checker();
/// Scan-then-check whose hand-off command closes the eye.
programs::TmProgram build_scan_then_check_closing_eye();

/// Robot in the state the Examples menu leaves it in, ready for Step.
robot::Robot make_example(int n, std::uint64_t seed = 0);

struct ExampleReport {
    std::vector<std::string> lines; ///< narrative and trace lines, in order
    programs::RunResult run;        ///< the final (examined) run
    std::optional<programs::RunResult> reference; ///< eyes-open comparison, when there is one
    bool agrees = true;             ///< verdict/tape agreement with the reference
};

/// Runs Example n end to end. `r` is left in its final state.
ExampleReport run_example(int n, robot::Robot& r);

/// Steps until AM is about to execute the checker's first command (uttered
/// '0' at square 1). Returns false if the run stopped first.
bool run_to_handoff(robot::Robot& r, long max_steps, programs::RunResult& acc);

struct ExamOptions {
    bool mental = false;       ///< scan with the eye open, then close it at the hand-off
    std::uint64_t seed = 0;
    std::vector<long> toggle_after_handoff; ///< extra human eye toggles, in steps after the hand-off
};

struct ExamResult {
    programs::RunResult run;
    char oracle = 'F';
    char verdict = '?';
    bool agrees = false;
};

/// Examines the checker on "A<expr>A". Plain runs use the Example 1 setup;
/// mental runs use the Example 2 setup.
ExamResult exam(const std::string& expr, const ExamOptions& opts = {});

/// Halt symbol of a run as a char, or '?' when it did not halt.
char verdict_of(const programs::RunResult& r);

} // namespace erobot::scenarios
