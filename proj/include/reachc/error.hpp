/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reachc {

class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Malformed textual input. `where` is a human-readable location such as
/// "line 3", "offset 12" or "layers[1][0].bias".
class ParseError : public Error {
public:
	ParseError(std::string where, const std::string &what)
	: Error(where.empty() ? what : where + ": " + what), where_(std::move(where))
	{}

	const std::string &where() const noexcept { return where_; }

private:
	std::string where_;
};

/// Structurally invalid network, formula or box.
class ValidationError : public Error {
public:
	using Error::Error;
};

/// Numeric argument outside the domain of an operation.
class DomainError : public Error {
public:
	using Error::Error;
};

} // namespace reachc
