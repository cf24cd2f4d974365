#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace volterra {

// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Kernel memory does not fit on the requested grid.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfGridError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A period does not divide the grid length.
class AliasingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InternalConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnboundName : public std::runtime_error {
public:
    explicit UnboundName(const std::string& name)
        : std::runtime_error("unbound name '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

}  // namespace volterra
