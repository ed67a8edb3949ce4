/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/bridge.hpp"
#include "reachc/error.hpp"

#include <cmath>

namespace reachc {

namespace {

Term num(long n)
{
	return Term::constant(Rational(n));
}

Term tau(Term t)
{
	return Term::apply(Fn::NLReLU, std::move(t));
}

} // namespace

BFormula psi_relu(const Term &x, const Term &z)
{
	return BFormula::iff(eq(z, x), gt(x, num(0))) && BFormula::iff(eq(z, num(0)), le(x, num(0)));
}

BFormula mk_psi_relu(const std::string &x, const std::string &z)
{
	if (x == z)
		throw DomainError("psi_relu needs distinct variables, got '" + x + "' twice");
	return psi_relu(Term::var(x), Term::var(z));
}

Definition psi_ln(const Term &x, const Term &y, FreshNames &fresh)
{
	std::string a = fresh.next("a"), b = fresh.next("b"), c = fresh.next("c");
	Term ta = Term::var(a), tb = Term::var(b), tc = Term::var(c);

	BFormula theta = BFormula::conjunction({
		eq(x, Term::apply(Fn::Sigma, ta)),
		eq(x, Term::apply(Fn::Tanh, tb)),
		eq(tc, tau(x)),
		eq(y, ta - Term::scale(Rational(2), tb) + tc),
	});
	BFormula f = BFormula::conjunction({
		BFormula::implies(lt(num(1), x), eq(y, tau(x - num(1)))),
		BFormula::iff(eq(x, num(1)), eq(y, num(0))),
		BFormula::implies(lt(num(0), x) && lt(x, num(1)), theta),
		lt(num(0), x),
	});

	WitnessMap w;
	auto inside = [](double v) { return v > 0 && v < 1; };
	w.define(a, [x, inside](const Assignment &env) {
		double v = x.eval(env);
		return inside(v) ? std::log(v / (1 - v)) : 0.0;
	});
	w.define(b, [x, inside](const Assignment &env) {
		double v = x.eval(env);
		return inside(v) ? std::atanh(v) : 0.0;
	});
	w.define(c, [x, inside](const Assignment &env) {
		double v = x.eval(env);
		return inside(v) ? std::log1p(v) : 0.0;
	});
	return {f, w};
}

namespace {

// u, v > 0 and w = u * v, through logarithms p = ln u, q = ln v
Definition theta_mul(const Term &u, const Term &v, const Term &w, FreshNames &fresh)
{
	std::string p = fresh.next("p"), q = fresh.next("q");
	Term tp = Term::var(p), tq = Term::var(q);
	WitnessMap wm;
	auto log_or_zero = [](const Term &t) {
		return [t](const Assignment &env) {
			double s = t.eval(env);
			return s > 0 ? std::log(s) : 0.0;
		};
	};
	wm.define(p, log_or_zero(u));
	wm.define(q, log_or_zero(v));
	Definition lu = psi_ln(u, tp, fresh);
	Definition lv = psi_ln(v, tq, fresh);
	Definition lw = psi_ln(w, tp + tq, fresh);
	wm.append(lu.witness);
	wm.append(lv.witness);
	wm.append(lw.witness);
	return {BFormula::conjunction({lu.formula, lv.formula, lw.formula}), wm};
}

} // namespace

Definition psi_mul(const Term &a, const Term &b, const Term &c, FreshNames &fresh)
{
	Term zero = num(0);
	Definition pp = theta_mul(a, b, c, fresh);
	Definition np = theta_mul(-a, b, -c, fresh);
	Definition pn = theta_mul(a, -b, -c, fresh);
	Definition nn = theta_mul(-a, -b, c, fresh);
	BFormula f = BFormula::conjunction({
		BFormula::implies(gt(a, zero) && gt(b, zero), pp.formula),
		BFormula::implies(lt(a, zero) && gt(b, zero), np.formula),
		BFormula::implies(gt(a, zero) && lt(b, zero), pn.formula),
		BFormula::implies(lt(a, zero) && lt(b, zero), nn.formula),
		BFormula::iff(BFormula::disjunction({eq(a, zero), eq(b, zero)}), eq(c, zero)),
	});
	WitnessMap w;
	for (const Definition *d : {&pp, &np, &pn, &nn})
		w.append(d->witness);
	return {f, w};
}

Definition psi_e(const Term &x, const Term &y, FreshNames &fresh)
{
	std::string a = fresh.next("a"), b = fresh.next("b");
	Term ta = Term::var(a), tb = Term::var(b);
	WitnessMap w;
	w.define(b, [x](const Assignment &env) {
		double v = x.eval(env);
		return v * v;
	});
	w.define(a, [x](const Assignment &env) {
		double v = x.eval(env);
		return 1 / (1 + v * v);
	});
	Definition ln = psi_ln(y, ta, fresh);
	Definition inv = psi_mul(ta, tb + num(1), num(1), fresh);
	Definition sq = psi_mul(x, x, tb, fresh);
	w.append(ln.witness);
	w.append(inv.witness);
	w.append(sq.witness);
	return {BFormula::conjunction({ln.formula, inv.formula, sq.formula}), w};
}

Definition mk_psi_ln(const std::string &x, const std::string &y)
{
	FreshNames fresh;
	return psi_ln(Term::var(x), Term::var(y), fresh);
}

Definition mk_psi_mul(const std::string &a, const std::string &b, const std::string &c)
{
	FreshNames fresh;
	return psi_mul(Term::var(a), Term::var(b), Term::var(c), fresh);
}

Definition mk_psi_e(const std::string &x, const std::string &y)
{
	FreshNames fresh;
	return psi_e(Term::var(x), Term::var(y), fresh);
}

} // namespace reachc
