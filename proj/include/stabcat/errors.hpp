#pragma once

#include <stdexcept>
#include <string>

namespace stabcat {

// Exit codes used by the command line tool. Library code throws the
// matching exception type and the tool maps it back.
enum class exit_code : int {
    ok = 0,
    check_failed = 1,
    parse = 2,
    window = 3,
    budget = 4,
    io = 5,
    precondition = 6,
    internal = 7,
};

class error : public std::runtime_error {
public:
    error(exit_code c, const std::string& what) : std::runtime_error(what), code_(c) {}
    exit_code code() const noexcept { return code_; }

private:
    exit_code code_;
};

struct parse_error : error {
    explicit parse_error(const std::string& w) : error(exit_code::parse, "parse error: " + w) {}
};

struct window_error : error {
    explicit window_error(const std::string& w) : error(exit_code::window, "window violation: " + w) {}
};

struct budget_error : error {
    explicit budget_error(const std::string& w) : error(exit_code::budget, "budget exceeded: " + w) {}
};

struct io_error : error {
    explicit io_error(const std::string& w) : error(exit_code::io, "i/o: " + w) {}
};

struct precondition_error : error {
    explicit precondition_error(const std::string& w) : error(exit_code::precondition, w) {}
};

struct internal_error : error {
    explicit internal_error(const std::string& w) : error(exit_code::internal, "internal: " + w) {}
};

} // namespace stabcat
