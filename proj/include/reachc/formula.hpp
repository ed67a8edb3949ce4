/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reachc {

enum class RelOp { GE, LE, GT, LT, EQ };

std::string_view to_string(RelOp op);

/// Affine constraint  sum_j coeffs[j] * y_j + bias  <op>  0  over output
/// variables. Indices are 0-based; y1 in the concrete syntax is index 0.
struct LinAtom {
	std::map<std::size_t, Rational> coeffs;
	Rational bias;
	RelOp op = RelOp::GE;

	/// Affine value sum c_j y_j + b.
	double value(std::span<const double> y) const;
	bool holds(std::span<const double> y) const;
	/// Drops zero coefficients.
	LinAtom canonical() const;
	/// Negated affine part, same relop.
	LinAtom negated() const;

	friend bool operator==(const LinAtom &, const LinAtom &) = default;
};

/// Immutable quantifier-free specification over output variables.
class Formula {
public:
	enum class Kind { True, False, Atom, Not, And, Or };

	static Formula top();
	static Formula bottom();
	static Formula atom(LinAtom a);
	static Formula negation(Formula f);
	static Formula conjunction(Formula a, Formula b);
	static Formula disjunction(Formula a, Formula b);

	Kind kind() const noexcept;
	const LinAtom &as_atom() const;
	/// Operand i of Not (i = 0) or And/Or (i = 0, 1).
	const Formula &child(std::size_t i) const;
	std::size_t arity() const noexcept;

	/// Node count.
	std::size_t size() const;
	/// Longest root-to-leaf path, counted in nodes.
	std::size_t height() const;
	/// Largest output index referenced plus one (0 when none).
	std::size_t min_output_dim() const;

	/// Parseable rendering, e.g. "(y1 - y2 >= 0 & !(-1*y1 >= 0))".
	std::string to_string() const;

	friend bool operator==(const Formula &a, const Formula &b);
	friend bool operator!=(const Formula &a, const Formula &b) { return !(a == b); }

	/// True when `sub` occurs in this tree (structural equality).
	bool contains(const Formula &sub) const;

private:
	struct Node;
	explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
	std::shared_ptr<const Node> node_;
};

/// Parses the concrete syntax:
///   formula := disj;  disj := conj ("|" conj)*;  conj := unary ("&" unary)*
///   unary   := "!" unary | "(" formula ")" | atom | "true" | "false"
///   atom    := linexpr relop linexpr;  relop := ">=" | "<=" | ">" | "<" | "="
///   linexpr := term (("+"|"-") term)*;  term := rational | rational "*" yvar | yvar
/// Output variables are y1..yk. Throws ParseError carrying the byte offset.
Formula parse_formula(std::string_view text, std::size_t output_dim);

/// Rewrites into True, GE atoms, Not and And only.
Formula normalize(const Formula &f);

enum class Truth { False, True, Marginal };

std::string_view to_string(Truth t);

/// Standard semantics on y. Marginal when some atom's affine value lies
/// strictly within `margin` of 0; with margin 0 the result is never Marginal.
Truth eval_formula(const Formula &f, std::span<const double> y, double margin = 0.0);

/// Subformulas ordered so that no element is a subformula of an earlier one,
/// ending with `f`; structurally equal subformulas appear once.
std::vector<Formula> generating_sequence(const Formula &f);

} // namespace reachc
