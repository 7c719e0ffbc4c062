#pragma once

#include <stdexcept>
#include <string>

namespace symx {

class SymxError : public std::runtime_error {
public:
    explicit SymxError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text; line/column are 1-based, 0 when unknown.
class ParseError : public SymxError {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : SymxError(format(msg, line, column)), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        std::string s = msg;
        if (line > 0) {
            s += " (line " + std::to_string(line);
            if (column > 0) s += ", column " + std::to_string(column);
            s += ")";
        }
        return s;
    }
    int line_;
    int column_;
};

class NonSquareError : public SymxError {
public:
    using SymxError::SymxError;
};

class NonFiniteValueError : public SymxError {
public:
    using SymxError::SymxError;
};

class IndexOutOfRangeError : public SymxError {
public:
    using SymxError::SymxError;
};

class EmptyResultError : public SymxError {
public:
    using SymxError::SymxError;
};

class OrderTooLargeError : public SymxError {
public:
    using SymxError::SymxError;
};

class OrderMismatchError : public SymxError {
public:
    using SymxError::SymxError;
};

class NotSymmetricError : public SymxError {
public:
    using SymxError::SymxError;
};

class NoConvergenceError : public SymxError {
public:
    using SymxError::SymxError;
};

class NotASymmetrizerError : public SymxError {
public:
    using SymxError::SymxError;
};

class MultiplicityTooHighError : public SymxError {
public:
    using SymxError::SymxError;
};

class PatternAcyclicError : public SymxError {
public:
    using SymxError::SymxError;
};

} // namespace symx
