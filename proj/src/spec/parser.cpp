/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/formula.hpp"

#include <cctype>

namespace reachc {

namespace {

class Parser {
public:
	Parser(std::string_view text, std::size_t k) : s_(text), k_(k) {}

	Formula run()
	{
		Formula f = disj();
		skip();
		if (pos_ != s_.size())
			fail("unexpected '" + std::string(1, s_[pos_]) + "'");
		return f;
	}

private:
	std::string_view s_;
	std::size_t k_;
	std::size_t pos_ = 0;

	[[noreturn]] void fail(const std::string &msg, std::size_t at) const
	{
		throw ParseError("offset " + std::to_string(at), msg);
	}
	[[noreturn]] void fail(const std::string &msg) const { fail(msg, pos_); }

	void skip()
	{
		while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
			pos_++;
	}

	bool at_end()
	{
		skip();
		return pos_ >= s_.size();
	}

	// U+2212 is accepted as a minus sign
	bool eat_minus()
	{
		skip();
		if (s_.substr(pos_, 1) == "-") {
			pos_ += 1;
			return true;
		}
		if (s_.substr(pos_, 3) == "\xE2\x88\x92") {
			pos_ += 3;
			return true;
		}
		return false;
	}

	bool eat(std::string_view tok)
	{
		skip();
		if (s_.substr(pos_, tok.size()) == tok) {
			pos_ += tok.size();
			return true;
		}
		return false;
	}

	bool peek_word(std::string_view w)
	{
		skip();
		if (s_.substr(pos_, w.size()) != w)
			return false;
		std::size_t e = pos_ + w.size();
		return e >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_');
	}

	Formula disj()
	{
		Formula f = conj();
		while (eat("|"))
			f = Formula::disjunction(f, conj());
		return f;
	}

	Formula conj()
	{
		Formula f = unary();
		while (eat("&"))
			f = Formula::conjunction(f, unary());
		return f;
	}

	Formula unary()
	{
		if (at_end())
			fail("unexpected end of formula");
		if (eat("!"))
			return Formula::negation(unary());
		if (eat("(")) {
			Formula f = disj();
			if (!eat(")"))
				fail(at_end() ? "missing ')'" : "expected ')'");
			return f;
		}
		if (peek_word("true")) {
			pos_ += 4;
			return Formula::top();
		}
		if (peek_word("false")) {
			pos_ += 5;
			return Formula::bottom();
		}
		return Formula::atom(atom());
	}

	LinAtom atom()
	{
		LinAtom a;
		linexpr(a, Rational(1));
		skip();
		std::size_t at = pos_;
		if (eat(">="))
			a.op = RelOp::GE;
		else if (eat("<="))
			a.op = RelOp::LE;
		else if (eat(">"))
			a.op = RelOp::GT;
		else if (eat("<"))
			a.op = RelOp::LT;
		else if (eat("="))
			a.op = RelOp::EQ;
		else
			fail(at_end() ? "expected relational operator, found end of formula"
			              : "expected relational operator",
			     at);
		linexpr(a, Rational(-1));
		return a.canonical();
	}

	// adds sign * expr to the atom's affine part
	void linexpr(LinAtom &a, const Rational &sign)
	{
		Rational s = sign;
		if (eat_minus())
			s = -sign;
		else
			eat("+");
		term(a, s);
		for (;;) {
			if (eat_minus())
				term(a, -sign);
			else if (eat("+"))
				term(a, sign);
			else
				break;
		}
	}

	void term(LinAtom &a, const Rational &sign)
	{
		skip();
		if (pos_ < s_.size() && s_[pos_] == 'y') {
			a.coeffs[yvar()] += sign;
			return;
		}
		Rational c = number();
		if (eat("*")) {
			skip();
			if (pos_ >= s_.size() || s_[pos_] != 'y')
				fail("expected output variable after '*'");
			a.coeffs[yvar()] += sign * c;
		} else {
			a.bias += sign * c;
		}
	}

	std::size_t yvar()
	{
		std::size_t start = pos_;
		pos_++;
		std::size_t d = pos_;
		while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
			pos_++;
		if (d == pos_)
			fail("expected digits after 'y'", start);
		std::string_view digits = s_.substr(d, pos_ - d);
		std::size_t j = 0;
		for (char ch : digits) {
			j = j * 10 + static_cast<std::size_t>(ch - '0');
			if (j > 1000000)
				break;
		}
		if (j == 0 || j > k_)
			fail("unknown output y" + std::string(digits), start);
		return j - 1;
	}

	Rational number()
	{
		std::size_t start = pos_;
		auto digit = [&] { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); };
		if (!digit())
			fail(pos_ >= s_.size() ? "unexpected end of formula" : "expected number or output variable");
		while (digit())
			pos_++;
		if (pos_ < s_.size() && s_[pos_] == '.') {
			pos_++;
			while (digit())
				pos_++;
		}
		if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
			pos_++;
			if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-'))
				pos_++;
			while (digit())
				pos_++;
		} else if (pos_ < s_.size() && s_[pos_] == '/') {
			pos_++;
			while (digit())
				pos_++;
		}
		try {
			return parse_rational(s_.substr(start, pos_ - start));
		} catch (const ParseError &e) {
			fail(std::string("bad number: ") + e.what(), start);
		}
	}
};

} // namespace

Formula parse_formula(std::string_view text, std::size_t output_dim)
{
	return Parser(text, output_dim).run();
}

} // namespace reachc
