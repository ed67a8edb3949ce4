/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace reachc {

/// Exact rational used for weights, biases, box endpoints and atom
/// coefficients.
using Rational = mpq_class;

/// Accepts "p", "p/q", and decimals with an optional exponent
/// ("-1.25", "3e-2"). Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" form.
std::string to_string(const Rational &q);

double to_double(const Rational &q);

/// Exact value of a finite double as a (dyadic) rational.
Rational exact_rational(double d);

/// The rational the shortest round-trip decimal text of `d` denotes, if that
/// rational is exactly `d`; nullopt otherwise (e.g. 0.1).
std::optional<Rational> rational_if_exact(double d);

} // namespace reachc
