#ifndef AUTOMATTE_ERROR_HPP
#define AUTOMATTE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace automatte {

// Violated precondition or contract (bad dimensions, out-of-range parameter, ...).
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// File I/O failure. The kind distinguishes the failure classes callers care about.
class IoError : public std::runtime_error {
public:
    enum class Kind { NotFound, Unsupported, Corrupt, Unwritable };

    IoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

} // namespace automatte

#endif
