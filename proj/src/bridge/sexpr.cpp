/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/bridge.hpp"
#include "reachc/error.hpp"

#include <cctype>

namespace reachc {

std::string to_sexpr(const Term &t)
{
	using K = Term::Kind;
	switch (t.kind()) {
	case K::Var: return t.name();
	case K::Const: return to_string(t.value());
	case K::Add: return "(+ " + to_sexpr(t.child(0)) + " " + to_sexpr(t.child(1)) + ")";
	case K::Sub: return "(- " + to_sexpr(t.child(0)) + " " + to_sexpr(t.child(1)) + ")";
	case K::Mul: return "(* " + to_sexpr(t.child(0)) + " " + to_sexpr(t.child(1)) + ")";
	case K::Scale: return "(* " + to_string(t.value()) + " " + to_sexpr(t.child(0)) + ")";
	case K::Apply: return "(" + std::string(to_string(t.fn())) + " " + to_sexpr(t.child(0)) + ")";
	}
	return "?";
}

std::string to_sexpr(const BFormula &f)
{
	using K = BFormula::Kind;
	auto list = [&](std::string head) {
		for (std::size_t i = 0; i < f.arity(); i++)
			head += " " + to_sexpr(f.child(i));
		return "(" + head + ")";
	};
	switch (f.kind()) {
	case K::True: return "true";
	case K::False: return "false";
	case K::Atom:
		return "(" + std::string(to_string(f.rel())) + " " + to_sexpr(f.lhs()) + " " + to_sexpr(f.rhs()) + ")";
	case K::Not: return list("not");
	case K::And: return list("and");
	case K::Or: return list("or");
	case K::Implies: return list("=>");
	case K::Iff: return list("iff");
	}
	return "?";
}

namespace {

struct SExpr {
	std::string atom;  // empty for lists
	std::vector<SExpr> items;
	std::size_t pos = 0;

	bool is_list() const { return atom.empty(); }
};

class Reader {
public:
	explicit Reader(std::string_view s) : s_(s) {}

	SExpr read_all()
	{
		SExpr e = read();
		skip();
		if (i_ < s_.size())
			fail("trailing input");
		return e;
	}

private:
	std::string_view s_;
	std::size_t i_ = 0;

	[[noreturn]] void fail(const std::string &msg) const
	{
		throw ParseError("offset " + std::to_string(i_), msg);
	}

	void skip()
	{
		while (i_ < s_.size()) {
			if (std::isspace(static_cast<unsigned char>(s_[i_])))
				i_++;
			else if (s_[i_] == ';')
				while (i_ < s_.size() && s_[i_] != '\n')
					i_++;
			else
				break;
		}
	}

	SExpr read()
	{
		skip();
		if (i_ >= s_.size())
			fail("unexpected end of input");
		SExpr e;
		e.pos = i_;
		if (s_[i_] == '(') {
			i_++;
			for (;;) {
				skip();
				if (i_ >= s_.size())
					fail("missing ')'");
				if (s_[i_] == ')') {
					i_++;
					return e;
				}
				e.items.push_back(read());
			}
		}
		if (s_[i_] == ')')
			fail("unexpected ')'");
		std::size_t start = i_;
		while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
		       s_[i_] != ')')
			i_++;
		e.atom = std::string(s_.substr(start, i_ - start));
		return e;
	}
};

[[noreturn]] void bad(const SExpr &e, const std::string &msg)
{
	throw ParseError("offset " + std::to_string(e.pos), msg);
}

bool numeric(const std::string &a)
{
	std::size_t i = a[0] == '-' ? 1 : 0;
	return i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]));
}

Term term(const SExpr &e)
{
	if (!e.is_list()) {
		if (numeric(e.atom)) {
			try {
				return Term::constant(parse_rational(e.atom));
			} catch (const ParseError &err) {
				bad(e, err.what());
			}
		}
		return Term::var(e.atom);
	}
	if (e.items.empty() || e.items[0].is_list())
		bad(e, "expected an operator");
	const std::string &op = e.items[0].atom;
	std::size_t n = e.items.size() - 1;
	auto arg = [&](std::size_t i) { return term(e.items[i + 1]); };
	auto need = [&](std::size_t k) {
		if (n != k)
			bad(e, "'" + op + "' expects " + std::to_string(k) + " argument(s), got " + std::to_string(n));
	};
	if (op == "+") {
		if (n < 2)
			bad(e, "'+' expects at least 2 arguments");
		Term t = arg(0);
		for (std::size_t i = 1; i < n; i++)
			t = Term::add(t, arg(i));
		return t;
	}
	if (op == "-") {
		if (n == 1)
			return Term::scale(Rational(-1), arg(0));
		need(2);
		return Term::sub(arg(0), arg(1));
	}
	if (op == "*") {
		need(2);
		const SExpr &first = e.items[1];
		if (!first.is_list() && numeric(first.atom))
			return Term::scale(parse_rational(first.atom), arg(1));
		return Term::mul(arg(0), arg(1));
	}
	for (Fn f : {Fn::Sigma, Fn::Tanh, Fn::NLReLU, Fn::ReLU, Fn::Exp, Fn::Ln, Fn::E}) {
		if (op == to_string(f)) {
			need(1);
			return Term::apply(f, arg(0));
		}
	}
	bad(e, "unknown function '" + op + "'");
}

BFormula formula(const SExpr &e)
{
	if (!e.is_list()) {
		if (e.atom == "true")
			return BFormula::top();
		if (e.atom == "false")
			return BFormula::bottom();
		bad(e, "expected a formula, found '" + e.atom + "'");
	}
	if (e.items.empty() || e.items[0].is_list())
		bad(e, "expected a connective or relation");
	const std::string &op = e.items[0].atom;
	std::size_t n = e.items.size() - 1;
	auto need = [&](std::size_t k) {
		if (n != k)
			bad(e, "'" + op + "' expects " + std::to_string(k) + " argument(s), got " + std::to_string(n));
	};
	for (BRel r : {BRel::LT, BRel::LE, BRel::EQ, BRel::GE, BRel::GT}) {
		if (op == to_string(r)) {
			need(2);
			return BFormula::atom(term(e.items[1]), r, term(e.items[2]));
		}
	}
	if (op == "not") {
		need(1);
		return BFormula::negation(formula(e.items[1]));
	}
	if (op == "and" || op == "or") {
		std::vector<BFormula> kids;
		for (std::size_t i = 1; i <= n; i++)
			kids.push_back(formula(e.items[i]));
		return op == "and" ? BFormula::conjunction(std::move(kids)) : BFormula::disjunction(std::move(kids));
	}
	if (op == "=>" || op == "iff") {
		need(2);
		BFormula a = formula(e.items[1]), b = formula(e.items[2]);
		return op == "=>" ? BFormula::implies(a, b) : BFormula::iff(a, b);
	}
	bad(e, "unknown connective '" + op + "'");
}

} // namespace

BFormula parse_bridge(std::string_view text)
{
	return formula(Reader(text).read_all());
}

Term parse_term(std::string_view text)
{
	return term(Reader(text).read_all());
}

} // namespace reachc
