#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the engine except for plain data types.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "erobot/programs.hpp"

namespace testsupport {

/// Every string over {'(', ')'} of length 0..max_len (2^0 + ... + 2^max_len strings).
inline std::vector<std::string> all_expressions(std::size_t max_len)
{
    std::vector<std::string> out{""};
    std::vector<std::string> layer{""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer) {
            next.push_back(s + '(');
            next.push_back(s + ')');
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

/// Stack matcher: balanced iff every ')' pops a pending '(' and none remain.
inline char stack_oracle(const std::string& expr)
{
    std::vector<char> stack;
    for (char c : expr) {
        if (c == '(') {
            stack.push_back(c);
        } else {
            if (stack.empty()) return 'F';
            stack.pop_back();
        }
    }
    return stack.empty() ? 'T' : 'F';
}

struct PlainRun {
    bool halted = false;
    char verdict = '?';
    long steps = 0;
    std::string tape;
};

/// Direct Turing-machine interpreter over a string tape (no fields involved).
inline PlainRun interpret(const erobot::programs::TmProgram& p, std::string tape, std::size_t head,
                          char state, long max_steps)
{
    std::map<std::pair<char, char>, erobot::programs::TmCommand> table;
    for (const auto& c : p.commands) table[{c.in_read.token()[0], c.in_state.token()[0]}] = c;
    PlainRun run;
    while (run.steps < max_steps) {
        auto it = table.find({tape.at(head), state});
        if (it == table.end()) break;
        const auto& c = it->second;
        ++run.steps;
        tape[head] = c.out_write.token()[0];
        state = c.out_state.token()[0];
        const char mv = c.out_move.token()[0];
        if (mv == 'L') --head;
        if (mv == 'R') ++head;
        if (state == 'H') {
            run.halted = true;
            run.verdict = c.out_write.token()[0];
            break;
        }
    }
    run.tape = tape;
    return run;
}

} // namespace testsupport
