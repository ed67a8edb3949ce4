/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/formula.hpp"
#include "reachc/network.hpp"
#include "reachc/rational.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reachc {

using Assignment = std::map<std::string, double, std::less<>>;

enum class Fn { Sigma, Tanh, NLReLU, ReLU, Exp, Ln, E };

std::string_view to_string(Fn f);
double fn_apply(Fn f, double x);

/// Real-valued term. Scale is multiplication by a rational constant and is
/// kept apart from the general product Mul.
class Term {
public:
	enum class Kind { Var, Const, Add, Sub, Mul, Scale, Apply };

	static Term var(std::string name);
	static Term constant(Rational q);
	static Term add(Term a, Term b);
	static Term sub(Term a, Term b);
	static Term mul(Term a, Term b);
	static Term scale(Rational q, Term t);
	static Term apply(Fn f, Term t);

	Kind kind() const noexcept;
	const std::string &name() const;     // Var
	const Rational &value() const;       // Const, Scale
	Fn fn() const;                       // Apply
	const Term &child(std::size_t i) const;
	std::size_t arity() const noexcept;

	/// Throws DomainError for variables missing from `env`.
	double eval(const Assignment &env) const;
	void vars(std::set<std::string> &out) const;

	friend bool operator==(const Term &a, const Term &b);

private:
	struct Node;
	explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
	std::shared_ptr<const Node> node_;
};

Term operator+(Term a, Term b);
Term operator-(Term a, Term b);
Term operator-(Term a);

enum class BRel { LT, LE, EQ, GE, GT };

std::string_view to_string(BRel r);

class BFormula {
public:
	enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff };

	static BFormula top();
	static BFormula bottom();
	static BFormula atom(Term lhs, BRel rel, Term rhs);
	static BFormula negation(BFormula f);
	/// n-ary; an empty list is true, a single operand is returned as is
	static BFormula conjunction(std::vector<BFormula> fs);
	static BFormula disjunction(std::vector<BFormula> fs);
	static BFormula implies(BFormula a, BFormula b);
	static BFormula iff(BFormula a, BFormula b);

	Kind kind() const noexcept;
	const Term &lhs() const;
	const Term &rhs() const;
	BRel rel() const;
	const BFormula &child(std::size_t i) const;
	std::size_t arity() const noexcept;

	std::set<std::string> free_vars() const;

	friend bool operator==(const BFormula &a, const BFormula &b);

private:
	struct Node;
	explicit BFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
	std::shared_ptr<const Node> node_;
};

BFormula operator&&(BFormula a, BFormula b);
BFormula eq(Term a, Term b);
BFormula lt(Term a, Term b);
BFormula le(Term a, Term b);
BFormula gt(Term a, Term b);
BFormula ge(Term a, Term b);

/// Equality and non-strict atoms that fail on doubles but whose sides differ
/// by at most `tol` may be read as true or false, independently per
/// occurrence; the formula holds if some such reading makes it true. Strict atoms are exact on doubles and
/// NaN makes an atom false. Throws DomainError for unbound variables.
bool eval_bridge(const BFormula &f, const Assignment &env, double tol);

/// Top-level conjuncts (flattening nested And) that fail under every reading.
std::vector<BFormula> failing_conjuncts(const BFormula &f, const Assignment &env, double tol);

/// Ordered closed-form definitions of fresh variables. Each function sees
/// the assignment extended by all earlier entries.
class WitnessMap {
public:
	using Def = std::function<double(const Assignment &)>;

	void define(std::string var, Def def);
	void append(const WitnessMap &other);
	/// Adds every fresh variable to `env`.
	void extend(Assignment &env) const;
	Assignment extended(Assignment env) const;
	std::vector<std::string> variables() const;
	std::size_t size() const noexcept { return defs_.size(); }

private:
	std::vector<std::pair<std::string, Def>> defs_;
};

/// Deterministic fresh names "<prefix><hint><n>"; primary variables must not
/// start with the prefix.
class FreshNames {
public:
	explicit FreshNames(std::string prefix = "_") : prefix_(std::move(prefix)) {}
	std::string next(std::string_view hint);
	const std::string &prefix() const noexcept { return prefix_; }

private:
	std::string prefix_;
	std::size_t counter_ = 0;
};

struct Definition {
	BFormula formula;
	WitnessMap witness;
};

/// (z = x <-> x > 0) & (z = 0 <-> x <= 0)
BFormula psi_relu(const Term &x, const Term &z);
/// Throws DomainError when x == z.
BFormula mk_psi_relu(const std::string &x, const std::string &z);

/// y = ln(x): (1 < x -> y = tau(x - 1)) & (x = 1 <-> y = 0)
///   & (0 < x < 1 -> x = sigma(a) & x = tanh(b) & c = tau(x) & y = a - 2b + c) & 0 < x
Definition psi_ln(const Term &x, const Term &y, FreshNames &fresh);
/// c = a * b by sign cases, each reduced to logarithms.
Definition psi_mul(const Term &a, const Term &b, const Term &c, FreshNames &fresh);
/// y = e(x) = exp(1 / (1 + x^2)) via y's logarithm a and b = x * x.
Definition psi_e(const Term &x, const Term &y, FreshNames &fresh);

Definition mk_psi_ln(const std::string &x, const std::string &y);
Definition mk_psi_mul(const std::string &a, const std::string &b, const std::string &c);
Definition mk_psi_e(const std::string &x, const std::string &y);

/// Signature predicates.
bool in_sigma_signature(const BFormula &f);  // +, -, scalar *, sigma, tanh, tau
bool in_exp_signature(const BFormula &f);    // +, -, *, exp
bool in_e_signature(const BFormula &f);      // +, -, *, e

/// Replaces products and e-applications by fresh variables constrained by
/// psi_mul / psi_e until the formula is in the sigma signature. Returns the
/// input unchanged when it has neither. Throws DomainError when the input is
/// outside the e signature or uses the fresh prefix.
Definition purify_e_to_sigma(const BFormula &f, FreshNames &fresh);
Definition purify_e_to_sigma(const BFormula &f);

/// S-expressions: (+ a b), (- a b), (* a b), (* q t) for Scale, (sigma t),
/// (tanh t), (nlrelu t), (relu t), (exp t), (ln t), (e t); atoms (< a b) ...;
/// (not f), (and ...), (or ...), (=> a b), (iff a b), true, false. Rationals
/// are written "3", "-3", "1/2". A product whose first operand is a rational
/// constant reads back as Scale.
std::string to_sexpr(const Term &t);
std::string to_sexpr(const BFormula &f);
BFormula parse_bridge(std::string_view text);
Term parse_term(std::string_view text);

enum class SmtHeader { NativeExp, Axiomatized };

/// SMT-LIB2 script for "exists x in box: N(x) satisfies f" with sigmoid,
/// tanh and tau nodes rewritten through exp. Variables: x<i>, b<n>/f<n> per
/// hidden neuron in layer order, y<j>, z<n> for tau's ReLU part.
std::string to_exp_smt(const Network &net, const Formula &f, const InputBox &box,
                       SmtHeader header = SmtHeader::NativeExp);

/// Problems found in an SMT-LIB2 script: unbalanced parentheses, symbols used
/// before declaration, sigmoid-family symbols. Empty when well-formed.
std::vector<std::string> check_smt_script(std::string_view script);

} // namespace reachc
