/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/bridge.hpp"
#include "reachc/error.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace reachc {

namespace {

std::string literal(const Rational &q)
{
	Rational a = abs(q);
	std::string s = a.get_den() == 1 ? a.get_num().get_str()
	                                 : "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
	return q < 0 ? "(- " + s + ")" : s;
}

// Sum of signed pieces, flattening runs of the same operator.
class SumBuilder {
public:
	void add(const Rational &c, const std::string &v)
	{
		if (c == 0)
			return;
		Rational a = abs(c);
		pieces_.push_back({c < 0, a == 1 ? v : "(* " + literal(a) + " " + v + ")"});
	}
	void add_const(const Rational &c)
	{
		if (c != 0)
			pieces_.push_back({c < 0, literal(abs(c))});
	}

	std::string str() const
	{
		if (pieces_.empty())
			return "0";
		std::string acc = pieces_[0].neg ? "(- " + pieces_[0].text + ")" : pieces_[0].text;
		std::vector<std::string> args;
		char op = 0;
		auto flush = [&] {
			if (op) {
				std::string s = std::string("(") + op + " " + acc;
				for (const auto &a : args)
					s += " " + a;
				acc = s + ")";
			}
			args.clear();
		};
		for (std::size_t i = 1; i < pieces_.size(); i++) {
			char want = pieces_[i].neg ? '-' : '+';
			if (want != op) {
				flush();
				op = want;
			}
			args.push_back(pieces_[i].text);
		}
		flush();
		return acc;
	}

private:
	struct Piece {
		bool neg;
		std::string text;
	};
	std::vector<Piece> pieces_;
};

std::string property(const Formula &f, const std::vector<std::string> &ys)
{
	using K = Formula::Kind;
	switch (f.kind()) {
	case K::True: return "true";
	case K::False: return "false";
	case K::Atom: {
		const LinAtom &a = f.as_atom();
		SumBuilder lhs;
		for (const auto &[j, c] : a.coeffs)
			lhs.add(c, ys.at(j));
		std::string rhs = literal(Rational(-a.bias));
		return "(" + std::string(to_string(a.op)) + " " + lhs.str() + " " + rhs + ")";
	}
	case K::Not: return "(not " + property(f.child(0), ys) + ")";
	case K::And: return "(and " + property(f.child(0), ys) + " " + property(f.child(1), ys) + ")";
	case K::Or: return "(or " + property(f.child(0), ys) + " " + property(f.child(1), ys) + ")";
	}
	return "?";
}

} // namespace

std::string to_exp_smt(const Network &net, const Formula &f, const InputBox &box, SmtHeader header)
{
	if (!net.valid())
		throw ValidationError("invalid network: " + net.errors().front().message);
	if (box.dim() != net.input_dim())
		throw ValidationError("box has " + std::to_string(box.dim()) + " intervals, network has " +
		                      std::to_string(net.input_dim()) + " inputs");
	if (f.min_output_dim() > net.output_dim())
		throw ValidationError("formula references y" + std::to_string(f.min_output_dim()) +
		                      " but the network has " + std::to_string(net.output_dim()) + " outputs");

	std::unordered_map<std::string, std::string> var;  // neuron id -> value variable
	std::vector<std::string> decls, asserts;
	std::vector<std::string> exp_args;
	auto exp_of = [&](const std::string &t) {
		exp_args.push_back(t);
		return "(exp " + t + ")";
	};

	for (std::size_t i = 0; i < net.input_dim(); i++) {
		std::string x = "x" + std::to_string(i + 1);
		var[net.layer(0)[i].id] = x;
		decls.push_back(x);
		const auto &[lo, hi] = box.bounds[i];
		asserts.push_back("(and (>= " + x + " " + literal(lo) + ") (<= " + x + " " + literal(hi) + "))");
	}

	auto affine = [&](const Neuron &n) {
		SumBuilder s;
		for (const Edge &e : n.incoming)
			s.add(e.weight, var.at(e.src));
		s.add_const(n.bias);
		return s.str();
	};

	std::size_t hidden = 0;
	for (std::size_t l = 1; l + 1 < net.depth(); l++) {
		for (const Neuron &n : net.layer(l)) {
			std::string idx = std::to_string(++hidden);
			std::string b = "b" + idx, fv = "f" + idx;
			decls.push_back(b);
			decls.push_back(fv);
			asserts.push_back("(= " + b + " " + affine(n) + ")");
			Activation act = n.activation.value_or(Activation::Identity);
			switch (act) {
			case Activation::ReLU:
				asserts.push_back("(and (= (= " + fv + " " + b + ") (> " + b + " 0)) (= (= " + fv +
				                  " 0) (<= " + b + " 0)))");
				break;
			case Activation::Sigmoid: {
				std::string eb = exp_of(b);
				asserts.push_back("(= (* " + fv + " (+ " + eb + " 1)) " + eb + ")");
				break;
			}
			case Activation::Tanh: {
				std::string ep = exp_of(b), en = exp_of("(- " + b + ")");
				asserts.push_back("(= (* " + fv + " (+ " + ep + " " + en + ")) (- " + ep + " " + en + "))");
				break;
			}
			case Activation::NLReLU: {
				std::string z = "z" + idx;
				decls.push_back(z);
				asserts.push_back("(and (= (= " + z + " " + b + ") (> " + b + " 0)) (= (= " + z +
				                  " 0) (<= " + b + " 0)))");
				asserts.push_back("(= " + exp_of(fv) + " (+ " + z + " 1))");
				break;
			}
			case Activation::Identity:
				asserts.push_back("(= " + fv + " " + b + ")");
				break;
			}
			var[n.id] = fv;
		}
	}

	std::vector<std::string> ys;
	for (std::size_t j = 0; j < net.output_dim(); j++) {
		const Neuron &n = net.layers().back()[j];
		std::string y = "y" + std::to_string(j + 1);
		decls.push_back(y);
		asserts.push_back("(= " + y + " " + affine(n) + ")");
		var[n.id] = y;
		ys.push_back(y);
	}
	asserts.push_back(property(f, ys));

	std::ostringstream out;
	out << "; exists x in box: N(x) = y and the property holds\n";
	if (header == SmtHeader::NativeExp) {
		out << "(set-logic QF_NRA)\n";
	} else {
		out << "(set-logic QF_UFNRA)\n";
		out << "(declare-fun exp (Real) Real)\n";
	}
	for (const auto &d : decls)
		out << "(declare-fun " << d << " () Real)\n";
	for (const auto &a : asserts)
		out << "(assert " << a << ")\n";
	if (header == SmtHeader::Axiomatized) {
		std::set<std::string> seen;
		for (const auto &t : exp_args) {
			if (!seen.insert(t).second)
				continue;
			out << "(assert (> (exp " << t << ") 0))\n";
			out << "(assert (>= (exp " << t << ") (+ 1 " << t << ")))\n";
		}
	}
	out << "(check-sat)\n";
	return out.str();
}

std::vector<std::string> check_smt_script(std::string_view s)
{
	static const std::set<std::string, std::less<>> builtin = {
		"set-logic", "set-info", "set-option", "declare-fun", "declare-const", "assert", "check-sat",
		"get-model", "exit", "and", "or", "not", "=>", "=", "<", "<=", ">", ">=", "+", "-", "*", "/",
		"ite", "true", "false", "Real", "Bool", "exp", "distinct", "xor"};
	static const std::set<std::string, std::less<>> forbidden = {"sigma", "tanh", "nlrelu", "tau"};

	std::vector<std::string> problems;
	std::vector<std::string> tokens;
	std::vector<std::size_t> where;
	long depth = 0;
	for (std::size_t i = 0; i < s.size();) {
		char c = s[i];
		if (c == ';') {
			while (i < s.size() && s[i] != '\n')
				i++;
		} else if (std::isspace(static_cast<unsigned char>(c))) {
			i++;
		} else if (c == '(' || c == ')') {
			depth += c == '(' ? 1 : -1;
			if (depth < 0) {
				problems.push_back("unbalanced ')' at offset " + std::to_string(i));
				depth = 0;
			}
			tokens.emplace_back(1, c);
			where.push_back(i);
			i++;
		} else {
			std::size_t j = i;
			while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
			       s[j] != ')' && s[j] != ';')
				j++;
			tokens.emplace_back(s.substr(i, j - i));
			where.push_back(i);
			i = j;
		}
	}
	if (depth != 0)
		problems.push_back(std::to_string(depth) + " unclosed '('");

	std::set<std::string, std::less<>> declared;
	bool saw_logic = false, saw_check = false;
	// walk top-level commands
	for (std::size_t i = 0; i < tokens.size();) {
		if (tokens[i] != "(") {
			problems.push_back("stray token '" + tokens[i] + "' at offset " + std::to_string(where[i]));
			i++;
			continue;
		}
		std::size_t end = i;
		long d = 0;
		for (; end < tokens.size(); end++) {
			if (tokens[end] == "(")
				d++;
			else if (tokens[end] == ")" && --d == 0)
				break;
		}
		std::string cmd = i + 1 < tokens.size() ? tokens[i + 1] : "";
		std::size_t body = i + 2;
		if (cmd == "set-logic") {
			saw_logic = true;
			body = end;
		} else if (cmd == "declare-fun" || cmd == "declare-const") {
			if (body < tokens.size()) {
				declared.insert(tokens[body]);
				if (forbidden.contains(tokens[body]))
					problems.push_back("sigmoid-family symbol '" + tokens[body] + "' declared");
			}
			body = end;
		} else if (cmd == "check-sat") {
			saw_check = true;
		} else if (!builtin.contains(cmd)) {
			problems.push_back("unknown command '" + cmd + "'");
		}
		for (std::size_t k = body; k < end && k < tokens.size(); k++) {
			const std::string &t = tokens[k];
			if (t == "(" || t == ")")
				continue;
			bool number = std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.';
			if (number)
				continue;
			if (forbidden.contains(t))
				problems.push_back("sigmoid-family symbol '" + t + "' at offset " + std::to_string(where[k]));
			else if (!builtin.contains(t) && !declared.contains(t))
				problems.push_back("symbol '" + t + "' used before declaration at offset " +
				                   std::to_string(where[k]));
		}
		i = end + 1;
	}
	if (!saw_logic)
		problems.push_back("missing set-logic");
	if (!saw_check)
		problems.push_back("missing check-sat");
	return problems;
}

} // namespace reachc
