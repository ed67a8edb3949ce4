/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/bridge.hpp"
#include "reachc/error.hpp"

#include <cmath>

namespace reachc {

std::string_view to_string(Fn f)
{
	switch (f) {
	case Fn::Sigma: return "sigma";
	case Fn::Tanh: return "tanh";
	case Fn::NLReLU: return "nlrelu";
	case Fn::ReLU: return "relu";
	case Fn::Exp: return "exp";
	case Fn::Ln: return "ln";
	case Fn::E: return "e";
	}
	return "?";
}

double fn_apply(Fn f, double x)
{
	if (std::isnan(x))
		return x;
	switch (f) {
	case Fn::Sigma:
		return x >= 0 ? 1 / (1 + std::exp(-x)) : std::exp(x) / (1 + std::exp(x));
	case Fn::Tanh: return std::tanh(x);
	case Fn::NLReLU: return x > 0 ? std::log1p(x) : 0.0;
	case Fn::ReLU: return x > 0 ? x : 0.0;
	case Fn::Exp: return std::exp(x);
	case Fn::Ln: return std::log(x);
	case Fn::E: return std::exp(1 / (1 + x * x));
	}
	return std::nan("");
}

struct Term::Node {
	Kind kind;
	std::string name;
	Rational q;
	Fn fn = Fn::Exp;
	std::vector<Term> kids;
};

Term Term::var(std::string name)
{
	if (name.empty())
		throw DomainError("empty variable name");
	return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, Fn::Exp, {}}));
}

Term Term::constant(Rational q)
{
	return Term(std::make_shared<const Node>(Node{Kind::Const, {}, std::move(q), Fn::Exp, {}}));
}

Term Term::add(Term a, Term b)
{
	return Term(std::make_shared<const Node>(Node{Kind::Add, {}, {}, Fn::Exp, {std::move(a), std::move(b)}}));
}

Term Term::sub(Term a, Term b)
{
	return Term(std::make_shared<const Node>(Node{Kind::Sub, {}, {}, Fn::Exp, {std::move(a), std::move(b)}}));
}

Term Term::mul(Term a, Term b)
{
	return Term(std::make_shared<const Node>(Node{Kind::Mul, {}, {}, Fn::Exp, {std::move(a), std::move(b)}}));
}

Term Term::scale(Rational q, Term t)
{
	return Term(std::make_shared<const Node>(Node{Kind::Scale, {}, std::move(q), Fn::Exp, {std::move(t)}}));
}

Term Term::apply(Fn f, Term t)
{
	return Term(std::make_shared<const Node>(Node{Kind::Apply, {}, {}, f, {std::move(t)}}));
}

Term::Kind Term::kind() const noexcept
{
	return node_->kind;
}

const std::string &Term::name() const
{
	if (node_->kind != Kind::Var)
		throw Error("term is not a variable");
	return node_->name;
}

const Rational &Term::value() const
{
	if (node_->kind != Kind::Const && node_->kind != Kind::Scale)
		throw Error("term carries no rational");
	return node_->q;
}

Fn Term::fn() const
{
	if (node_->kind != Kind::Apply)
		throw Error("term is not a function application");
	return node_->fn;
}

const Term &Term::child(std::size_t i) const
{
	return node_->kids.at(i);
}

std::size_t Term::arity() const noexcept
{
	return node_->kids.size();
}

double Term::eval(const Assignment &env) const
{
	switch (node_->kind) {
	case Kind::Var: {
		auto it = env.find(node_->name);
		if (it == env.end())
			throw DomainError("unbound variable '" + node_->name + "'");
		return it->second;
	}
	case Kind::Const: return to_double(node_->q);
	case Kind::Add: return child(0).eval(env) + child(1).eval(env);
	case Kind::Sub: return child(0).eval(env) - child(1).eval(env);
	case Kind::Mul: return child(0).eval(env) * child(1).eval(env);
	case Kind::Scale: return to_double(node_->q) * child(0).eval(env);
	case Kind::Apply: return fn_apply(node_->fn, child(0).eval(env));
	}
	return std::nan("");
}

void Term::vars(std::set<std::string> &out) const
{
	if (node_->kind == Kind::Var)
		out.insert(node_->name);
	for (const auto &k : node_->kids)
		k.vars(out);
}

bool operator==(const Term &a, const Term &b)
{
	if (a.node_ == b.node_)
		return true;
	const auto &x = *a.node_, &y = *b.node_;
	return x.kind == y.kind && x.name == y.name && x.q == y.q && x.fn == y.fn && x.kids == y.kids;
}

Term operator+(Term a, Term b)
{
	return Term::add(std::move(a), std::move(b));
}

Term operator-(Term a, Term b)
{
	return Term::sub(std::move(a), std::move(b));
}

Term operator-(Term a)
{
	return Term::scale(Rational(-1), std::move(a));
}

std::string_view to_string(BRel r)
{
	switch (r) {
	case BRel::LT: return "<";
	case BRel::LE: return "<=";
	case BRel::EQ: return "=";
	case BRel::GE: return ">=";
	case BRel::GT: return ">";
	}
	return "?";
}

struct BFormula::Node {
	Kind kind;
	std::vector<Term> terms;  // lhs, rhs for atoms
	BRel rel = BRel::EQ;
	std::vector<BFormula> kids;
};

BFormula BFormula::top()
{
	static const BFormula t(std::make_shared<const Node>(Node{Kind::True, {}, BRel::EQ, {}}));
	return t;
}

BFormula BFormula::bottom()
{
	static const BFormula f(std::make_shared<const Node>(Node{Kind::False, {}, BRel::EQ, {}}));
	return f;
}

BFormula BFormula::atom(Term lhs, BRel rel, Term rhs)
{
	return BFormula(std::make_shared<const Node>(Node{Kind::Atom, {std::move(lhs), std::move(rhs)}, rel, {}}));
}

BFormula BFormula::negation(BFormula f)
{
	return BFormula(std::make_shared<const Node>(Node{Kind::Not, {}, BRel::EQ, {std::move(f)}}));
}

BFormula BFormula::conjunction(std::vector<BFormula> fs)
{
	if (fs.empty())
		return top();
	if (fs.size() == 1)
		return fs.front();
	return BFormula(std::make_shared<const Node>(Node{Kind::And, {}, BRel::EQ, std::move(fs)}));
}

BFormula BFormula::disjunction(std::vector<BFormula> fs)
{
	if (fs.empty())
		return bottom();
	if (fs.size() == 1)
		return fs.front();
	return BFormula(std::make_shared<const Node>(Node{Kind::Or, {}, BRel::EQ, std::move(fs)}));
}

BFormula BFormula::implies(BFormula a, BFormula b)
{
	return BFormula(std::make_shared<const Node>(Node{Kind::Implies, {}, BRel::EQ, {std::move(a), std::move(b)}}));
}

BFormula BFormula::iff(BFormula a, BFormula b)
{
	return BFormula(std::make_shared<const Node>(Node{Kind::Iff, {}, BRel::EQ, {std::move(a), std::move(b)}}));
}

BFormula::Kind BFormula::kind() const noexcept
{
	return node_->kind;
}

const Term &BFormula::lhs() const
{
	if (node_->kind != Kind::Atom)
		throw Error("formula is not an atom");
	return node_->terms[0];
}

const Term &BFormula::rhs() const
{
	if (node_->kind != Kind::Atom)
		throw Error("formula is not an atom");
	return node_->terms[1];
}

BRel BFormula::rel() const
{
	if (node_->kind != Kind::Atom)
		throw Error("formula is not an atom");
	return node_->rel;
}

const BFormula &BFormula::child(std::size_t i) const
{
	return node_->kids.at(i);
}

std::size_t BFormula::arity() const noexcept
{
	return node_->kids.size();
}

std::set<std::string> BFormula::free_vars() const
{
	std::set<std::string> out;
	for (const auto &t : node_->terms)
		t.vars(out);
	for (const auto &k : node_->kids)
		for (auto &v : k.free_vars())
			out.insert(v);
	return out;
}

bool operator==(const BFormula &a, const BFormula &b)
{
	if (a.node_ == b.node_)
		return true;
	const auto &x = *a.node_, &y = *b.node_;
	return x.kind == y.kind && x.rel == y.rel && x.terms == y.terms && x.kids == y.kids;
}

BFormula operator&&(BFormula a, BFormula b)
{
	return BFormula::conjunction({std::move(a), std::move(b)});
}

BFormula eq(Term a, Term b) { return BFormula::atom(std::move(a), BRel::EQ, std::move(b)); }
BFormula lt(Term a, Term b) { return BFormula::atom(std::move(a), BRel::LT, std::move(b)); }
BFormula le(Term a, Term b) { return BFormula::atom(std::move(a), BRel::LE, std::move(b)); }
BFormula gt(Term a, Term b) { return BFormula::atom(std::move(a), BRel::GT, std::move(b)); }
BFormula ge(Term a, Term b) { return BFormula::atom(std::move(a), BRel::GE, std::move(b)); }

namespace {

// Possible truth values of a formula when every non-strict atom that fails
// on doubles but whose sides agree within tol may be read either way.
struct Possible {
	bool t, f;
};

Possible possible(const BFormula &g, const Assignment &env, double tol)
{
	using K = BFormula::Kind;
	switch (g.kind()) {
	case K::True: return {true, false};
	case K::False: return {false, true};
	case K::Atom: {
		double l = g.lhs().eval(env), r = g.rhs().eval(env);
		if (std::isnan(l) || std::isnan(r))
			return {false, true};
		bool near = std::fabs(l - r) <= tol;
		bool exact = false;
		switch (g.rel()) {
		case BRel::LT: exact = l < r; break;
		case BRel::GT: exact = l > r; break;
		case BRel::LE: exact = l <= r; break;
		case BRel::GE: exact = l >= r; break;
		case BRel::EQ: exact = l == r; break;
		}
		if (!exact && near && g.rel() != BRel::LT && g.rel() != BRel::GT)
			return {true, true};
		return {exact, !exact};
	}
	case K::Not: {
		Possible p = possible(g.child(0), env, tol);
		return {p.f, p.t};
	}
	case K::And:
	case K::Or: {
		bool all_t = true, any_t = false, all_f = true, any_f = false;
		for (std::size_t i = 0; i < g.arity(); i++) {
			Possible p = possible(g.child(i), env, tol);
			all_t = all_t && p.t;
			any_t = any_t || p.t;
			all_f = all_f && p.f;
			any_f = any_f || p.f;
		}
		return g.kind() == K::And ? Possible{all_t, any_f} : Possible{any_t, all_f};
	}
	case K::Implies: {
		Possible a = possible(g.child(0), env, tol), b = possible(g.child(1), env, tol);
		return {a.f || b.t, a.t && b.f};
	}
	case K::Iff: {
		Possible a = possible(g.child(0), env, tol), b = possible(g.child(1), env, tol);
		return {(a.t && b.t) || (a.f && b.f), (a.t && b.f) || (a.f && b.t)};
	}
	}
	return {false, true};
}

} // namespace

bool eval_bridge(const BFormula &f, const Assignment &env, double tol)
{
	return possible(f, env, tol).t;
}

std::vector<BFormula> failing_conjuncts(const BFormula &f, const Assignment &env, double tol)
{
	std::vector<BFormula> out;
	if (f.kind() == BFormula::Kind::And) {
		for (std::size_t i = 0; i < f.arity(); i++)
			for (auto &g : failing_conjuncts(f.child(i), env, tol))
				out.push_back(std::move(g));
	} else if (!eval_bridge(f, env, tol)) {
		out.push_back(f);
	}
	return out;
}

void WitnessMap::define(std::string var, Def def)
{
	defs_.emplace_back(std::move(var), std::move(def));
}

void WitnessMap::append(const WitnessMap &other)
{
	defs_.insert(defs_.end(), other.defs_.begin(), other.defs_.end());
}

void WitnessMap::extend(Assignment &env) const
{
	for (const auto &[v, def] : defs_)
		env[v] = def(env);
}

Assignment WitnessMap::extended(Assignment env) const
{
	extend(env);
	return env;
}

std::vector<std::string> WitnessMap::variables() const
{
	std::vector<std::string> out;
	for (const auto &d : defs_)
		out.push_back(d.first);
	return out;
}

std::string FreshNames::next(std::string_view hint)
{
	return prefix_ + std::string(hint) + std::to_string(++counter_);
}

} // namespace reachc
