#ifndef ORDAUTO_ERRORS_HPP
#define ORDAUTO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ordauto {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// a > b in left_subtract(a, b).
struct UnderflowError : Error {
    using Error::Error;
};

// A construction left the configured CNF nesting-depth budget, or an
// acceleration ladder failed to close within its iteration cap.
struct DepthError : Error {
    using Error::Error;
};

// Position outside a word, index outside a tape.
struct RangeError : Error {
    using Error::Error;
};

// Operands declared over incompatible alphabets.
struct AlphabetError : Error {
    using Error::Error;
};

// complement() called on an automaton that is not complete.
struct NotCompleteError : Error {
    using Error::Error;
};

// quotient construction: some representative*generator word matches no class.
struct NotClosedError : Error {
    using Error::Error;
};

// quotient construction: a class mixes members and non-members.
struct InconsistentError : Error {
    using Error::Error;
};

// A language oracle was asked about a word outside its representable domain.
struct OutOfModelError : Error {
    using Error::Error;
};

// Text input did not parse; message carries line/column.
struct ParseError : Error {
    ParseError(const std::string& msg, int line, int col)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line),
          col(col) {}
    explicit ParseError(const std::string& msg) : Error(msg), line(0), col(0) {}
    int line;
    int col;
};

// A state-space guard tripped (automaton too large for set-run machinery).
struct GuardError : Error {
    using Error::Error;
};

// Operation precondition violated (e.g. too few pump checkpoints).
struct PreconditionError : Error {
    using Error::Error;
};

}  // namespace ordauto

#endif
