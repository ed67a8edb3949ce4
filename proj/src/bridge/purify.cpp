/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/bridge.hpp"
#include "reachc/error.hpp"

#include <cmath>
#include <unordered_map>

namespace reachc {

namespace {

template <class Allowed>
bool term_ok(const Term &t, bool products, Allowed allowed)
{
	switch (t.kind()) {
	case Term::Kind::Mul:
		if (!products)
			return false;
		break;
	case Term::Kind::Apply:
		if (!allowed(t.fn()))
			return false;
		break;
	default:
		break;
	}
	for (std::size_t i = 0; i < t.arity(); i++)
		if (!term_ok(t.child(i), products, allowed))
			return false;
	return true;
}

template <class Allowed>
bool formula_ok(const BFormula &f, bool products, Allowed allowed)
{
	if (f.kind() == BFormula::Kind::Atom)
		return term_ok(f.lhs(), products, allowed) && term_ok(f.rhs(), products, allowed);
	for (std::size_t i = 0; i < f.arity(); i++)
		if (!formula_ok(f.child(i), products, allowed))
			return false;
	return true;
}

class Purifier {
public:
	explicit Purifier(FreshNames &fresh) : fresh_(fresh) {}

	BFormula formula(const BFormula &f)
	{
		using K = BFormula::Kind;
		switch (f.kind()) {
		case K::True:
		case K::False:
			return f;
		case K::Atom:
			return BFormula::atom(term(f.lhs()), f.rel(), term(f.rhs()));
		case K::Not:
			return BFormula::negation(formula(f.child(0)));
		case K::And:
		case K::Or: {
			std::vector<BFormula> kids;
			for (std::size_t i = 0; i < f.arity(); i++)
				kids.push_back(formula(f.child(i)));
			return f.kind() == K::And ? BFormula::conjunction(std::move(kids))
			                          : BFormula::disjunction(std::move(kids));
		}
		case K::Implies:
			return BFormula::implies(formula(f.child(0)), formula(f.child(1)));
		case K::Iff:
			return BFormula::iff(formula(f.child(0)), formula(f.child(1)));
		}
		return f;
	}

	std::vector<BFormula> defs;
	WitnessMap witness;

private:
	FreshNames &fresh_;
	std::unordered_map<std::string, Term> cache_;

	Term term(const Term &t)
	{
		using K = Term::Kind;
		switch (t.kind()) {
		case K::Var:
		case K::Const:
			return t;
		case K::Add: return Term::add(term(t.child(0)), term(t.child(1)));
		case K::Sub: return Term::sub(term(t.child(0)), term(t.child(1)));
		case K::Scale: return Term::scale(t.value(), term(t.child(0)));
		case K::Mul: {
			Term a = term(t.child(0)), b = term(t.child(1));
			if (a.kind() == K::Const)
				return Term::scale(a.value(), b);
			if (b.kind() == K::Const)
				return Term::scale(b.value(), a);
			std::string key = "(* " + to_sexpr(a) + " " + to_sexpr(b) + ")";
			if (auto it = cache_.find(key); it != cache_.end())
				return it->second;
			std::string c = fresh_.next("m");
			Term tc = Term::var(c);
			witness.define(c, [a, b](const Assignment &env) { return a.eval(env) * b.eval(env); });
			Definition d = psi_mul(a, b, tc, fresh_);
			defs.push_back(d.formula);
			witness.append(d.witness);
			cache_.emplace(key, tc);
			return tc;
		}
		case K::Apply: {
			if (t.fn() != Fn::E)
				throw DomainError("purification input uses '" + std::string(to_string(t.fn())) +
				                  "', which is outside the e signature");
			Term x = term(t.child(0));
			std::string key = "(e " + to_sexpr(x) + ")";
			if (auto it = cache_.find(key); it != cache_.end())
				return it->second;
			std::string y = fresh_.next("e");
			Term ty = Term::var(y);
			witness.define(y, [x](const Assignment &env) { return fn_apply(Fn::E, x.eval(env)); });
			Definition d = psi_e(x, ty, fresh_);
			defs.push_back(d.formula);
			witness.append(d.witness);
			cache_.emplace(key, ty);
			return ty;
		}
		}
		return t;
	}
};

} // namespace

bool in_sigma_signature(const BFormula &f)
{
	return formula_ok(f, false, [](Fn g) { return g == Fn::Sigma || g == Fn::Tanh || g == Fn::NLReLU; });
}

bool in_exp_signature(const BFormula &f)
{
	return formula_ok(f, true, [](Fn g) { return g == Fn::Exp; });
}

bool in_e_signature(const BFormula &f)
{
	return formula_ok(f, true, [](Fn g) { return g == Fn::E; });
}

Definition purify_e_to_sigma(const BFormula &f, FreshNames &fresh)
{
	if (!in_e_signature(f))
		throw DomainError("formula is not in the e signature");
	for (const auto &v : f.free_vars())
		if (v.starts_with(fresh.prefix()))
			throw DomainError("variable '" + v + "' uses the reserved prefix '" + fresh.prefix() + "'");

	Purifier p(fresh);
	BFormula body = p.formula(f);
	if (p.defs.empty())
		return {body == f ? f : body, {}};
	std::vector<BFormula> parts{body};
	parts.insert(parts.end(), p.defs.begin(), p.defs.end());
	return {BFormula::conjunction(std::move(parts)), p.witness};
}

Definition purify_e_to_sigma(const BFormula &f)
{
	FreshNames fresh;
	return purify_e_to_sigma(f, fresh);
}

} // namespace reachc
