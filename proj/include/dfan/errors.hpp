#pragma once

#include <stdexcept>
#include <string>

namespace dfan {

// Operator text / input file rejected; line and col are 1-based.
struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

// A step/pair/round budget ran out before the computation finished.
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A contract the algorithms rely on failed; never a recoverable condition.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct SignatureMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace dfan
