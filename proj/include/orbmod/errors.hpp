#pragma once

#include <stdexcept>
#include <string>

namespace orbmod {

// Precondition violated by the caller (bad degree, index out of range, ...).
class ContractError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

class InvalidPointError : public ContractError {
public:
	using ContractError::ContractError;
};

// A search ran out of its node/pair/coefficient budget. Not a verdict.
class BudgetExceeded : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// A bounded search finished without finding what was asked for.
class NotFound : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class CacheIntegrityError : public std::runtime_error {
public:
	CacheIntegrityError(const std::string& path, std::size_t line, const std::string& what)
		: std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

} // namespace orbmod
