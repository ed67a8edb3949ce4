/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

// Random instances and independent oracles shared by the unit and
// acceptance tests.

#include "reachc/bridge.hpp"
#include "reachc/formula.hpp"
#include "reachc/network.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testkit {

using reachc::Activation;
using reachc::Edge;
using reachc::Formula;
using reachc::InputBox;
using reachc::LinAtom;
using reachc::Network;
using reachc::Neuron;
using reachc::Rational;
using reachc::RelOp;
using Rng = std::mt19937_64;

inline int uniform_int(Rng &rng, int lo, int hi)
{
	return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(Rng &rng, double lo, double hi)
{
	return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// p/q with |p| <= range * q, q in {1, 2, 4}
inline Rational small_rational(Rng &rng, int range)
{
	int q = 1 << uniform_int(rng, 0, 2);
	Rational r(uniform_int(rng, -range * q, range * q), q);
	r.canonicalize();
	return r;
}

inline Network fig1()
{
	using V = std::vector<Neuron>;
	return Network({
		V{{"x1", {}, 0, {}}, {"x2", {}, 0, {}}, {"x3", {}, 0, {}}},
		V{{"v1", Activation::ReLU, 0, {{"x1", 1}, {"x2", -1}}},
		  {"v2", Activation::ReLU, 0, {{"x2", 1}, {"x3", -1}}}},
		V{{"v3", Activation::Sigmoid, 0, {{"v1", 1}, {"v2", -1}}}},
		V{{"y", {}, 0, {{"v3", 4}}}},
	});
}

inline Network fig2a()
{
	using V = std::vector<Neuron>;
	return Network({
		V{{"x1", {}, 0, {}}, {"x2", {}, 0, {}}, {"x3", {}, 0, {}}, {"x4", {}, 0, {}}},
		V{{"v1", Activation::ReLU, 0, {{"x1", 1}, {"x2", -1}}},
		  {"v2", Activation::ReLU, 0, {{"x2", 1}, {"x3", -1}}},
		  {"v3", Activation::ReLU, 0, {{"x3", 1}, {"x4", -1}}}},
		V{{"y1", {}, 0, {{"v1", 5}, {"v2", -3}}}, {"y2", {}, 0, {{"v2", 3}, {"v3", -5}}}},
	});
}

struct NetShape {
	std::size_t inputs = 2, outputs = 1;
	std::size_t max_neurons = 30;  // inputs and outputs included
	std::size_t max_hidden_layers = 3;
	std::size_t max_width = 4;
	int weight_range = 2;
	std::vector<Activation> activations{Activation::ReLU};
	double skip_probability = 0.0;
};

// Dense random network; each neuron reads every neuron of the previous layer
// and, with the given probability, one earlier neuron through a skip edge.
inline Network random_network(Rng &rng, const NetShape &s)
{
	std::vector<std::vector<Neuron>> layers(1);
	for (std::size_t i = 0; i < s.inputs; i++)
		layers[0].push_back({"x" + std::to_string(i + 1), {}, 0, {}});
	std::size_t budget = s.max_neurons - s.inputs - s.outputs;
	std::size_t hidden = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(s.max_hidden_layers)));
	std::vector<std::size_t> widths;
	for (std::size_t l = 0; l < hidden && budget > 0; l++) {
		std::size_t w = std::min<std::size_t>(budget, static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(s.max_width))));
		widths.push_back(w);
		budget -= w;
	}
	widths.push_back(s.outputs);
	for (std::size_t l = 0; l < widths.size(); l++) {
		bool out = l + 1 == widths.size();
		std::vector<Neuron> layer;
		for (std::size_t j = 0; j < widths[l]; j++) {
			Neuron n;
			n.id = (out ? "y" : "n" + std::to_string(l + 1) + "_") + std::to_string(j + 1);
			if (!out)
				n.activation = s.activations[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(s.activations.size()) - 1))];
			n.bias = small_rational(rng, s.weight_range);
			for (const auto &src : layers.back())
				n.incoming.push_back({src.id, small_rational(rng, s.weight_range)});
			if (layers.size() >= 2 && uniform(rng, 0, 1) < s.skip_probability) {
				const auto &early = layers[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(layers.size()) - 2))];
				const auto &src = early[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(early.size()) - 1))];
				n.incoming.push_back({src.id, small_rational(rng, s.weight_range)});
			}
			layer.push_back(std::move(n));
		}
		layers.push_back(std::move(layer));
	}
	return Network(std::move(layers));
}

inline InputBox random_subbox(Rng &rng, std::size_t m)
{
	InputBox b;
	for (std::size_t i = 0; i < m; i++) {
		Rational a(uniform_int(rng, 0, 8), 8), c(uniform_int(rng, 0, 8), 8);
		a.canonicalize();
		c.canonicalize();
		if (a > c)
			std::swap(a, c);
		b.bounds.emplace_back(a, c);
	}
	return b;
}

inline std::vector<double> sample_in(Rng &rng, const InputBox &b)
{
	std::vector<double> x;
	for (const auto &[lo, hi] : b.bounds)
		x.push_back(uniform(rng, reachc::to_double(lo), reachc::to_double(hi)));
	return x;
}

inline LinAtom random_atom(Rng &rng, std::size_t k)
{
	static const RelOp ops[] = {RelOp::GE, RelOp::LE, RelOp::GT, RelOp::LT, RelOp::EQ};
	LinAtom a;
	for (std::size_t j = 0; j < k; j++)
		if (uniform_int(rng, 0, 1) == 1 || (j + 1 == k && a.coeffs.empty()))
			a.coeffs[j] = small_rational(rng, 2);
	a.bias = small_rational(rng, 2);
	// equalities are rarely satisfied by samples; keep them uncommon
	a.op = ops[uniform_int(rng, 0, 9) == 0 ? 4 : uniform_int(rng, 0, 3)];
	return a.canonical();
}

// Random formula over the full connective set with at most `max_nodes` nodes.
inline Formula random_formula(Rng &rng, std::size_t k, std::size_t max_nodes)
{
	if (max_nodes <= 1) {
		int r = uniform_int(rng, 0, 19);
		if (r == 0)
			return Formula::top();
		if (r == 1)
			return Formula::bottom();
		return Formula::atom(random_atom(rng, k));
	}
	switch (uniform_int(rng, 0, 4)) {
	case 0:
		return Formula::negation(random_formula(rng, k, max_nodes - 1));
	case 1:
	case 2: {
		std::size_t left = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(max_nodes) - 2 > 0 ? static_cast<int>(max_nodes) - 2 : 1));
		std::size_t right = max_nodes - 1 - left;
		if (right == 0)
			right = 1;
		Formula a = random_formula(rng, k, left), b = random_formula(rng, k, right);
		return uniform_int(rng, 0, 1) ? Formula::conjunction(a, b) : Formula::disjunction(a, b);
	}
	default:
		return random_formula(rng, k, 1);
	}
}

// Oracle for the sup of a 1- or 2-input scalar network over a box: the grid
// maximum and a Lipschitz bound (product of the layer-wise infinity-norm row
// sums times activation slopes) valid for skip-free networks.
struct GridSup {
	double grid_max = -INFINITY;
	double slack = 0;  // sup <= grid_max + slack
};

inline double lipschitz_bound(const Network &net)
{
	double L = 1;
	for (std::size_t l = 1; l < net.depth(); l++) {
		double row = 0;
		for (const Neuron &n : net.layer(l)) {
			double s = 0;
			for (const Edge &e : n.incoming)
				s += std::fabs(reachc::to_double(e.weight));
			double slope = n.activation && *n.activation == Activation::Sigmoid ? 0.25 : 1.0;
			row = std::max(row, s * slope);
		}
		L *= row;
	}
	return L;
}

inline GridSup grid_sup(const Network &net, const InputBox &box, std::size_t per_dim)
{
	reachc::Evaluator ev(net);
	std::size_t m = box.dim();
	std::vector<double> lo, hi;
	double spacing = 0;
	for (const auto &[a, b] : box.bounds) {
		lo.push_back(reachc::to_double(a));
		hi.push_back(reachc::to_double(b));
		spacing = std::max(spacing, (hi.back() - lo.back()) / static_cast<double>(per_dim - 1));
	}
	GridSup g;
	std::vector<double> x(m);
	std::size_t total = 1;
	for (std::size_t i = 0; i < m; i++)
		total *= per_dim;
	for (std::size_t idx = 0; idx < total; idx++) {
		std::size_t r = idx;
		for (std::size_t i = 0; i < m; i++) {
			std::size_t k = r % per_dim;
			r /= per_dim;
			x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(k) / static_cast<double>(per_dim - 1);
		}
		g.grid_max = std::max(g.grid_max, ev.scalar(x));
	}
	g.slack = lipschitz_bound(net) * spacing / 2;
	return g;
}

// Sigma-e formula generator for purification tests: terms over x1..x3 built
// from +, -, scalar *, *, e; atoms keep a margin at the known assignment.
inline reachc::Term random_e_term(Rng &rng, int depth)
{
	using reachc::Term;
	if (depth <= 0 || uniform_int(rng, 0, 3) == 0) {
		if (uniform_int(rng, 0, 3) == 0)
			return Term::constant(small_rational(rng, 2));
		return Term::var("x" + std::to_string(uniform_int(rng, 1, 3)));
	}
	switch (uniform_int(rng, 0, 4)) {
	case 0: return Term::add(random_e_term(rng, depth - 1), random_e_term(rng, depth - 1));
	case 1: return Term::sub(random_e_term(rng, depth - 1), random_e_term(rng, depth - 1));
	case 2: return Term::mul(random_e_term(rng, depth - 1), random_e_term(rng, depth - 1));
	case 3: return Term::scale(small_rational(rng, 2), random_e_term(rng, depth - 1));
	default: return Term::apply(reachc::Fn::E, random_e_term(rng, depth - 1));
	}
}

inline reachc::BFormula random_e_atom(Rng &rng, const reachc::Assignment &env)
{
	using namespace reachc;
	Term t = random_e_term(rng, 3);
	double v = t.eval(env);
	// a rational at least 1/8 away from v on a random side
	Rational r(static_cast<long>(std::floor(v * 8)) - uniform_int(rng, 1, 8), 8);
	r.canonicalize();
	if (uniform_int(rng, 0, 1))
		r = Rational(static_cast<long>(std::ceil(v * 8)) + uniform_int(rng, 1, 8), 8);
	r.canonicalize();
	BRel rels[] = {BRel::LT, BRel::LE, BRel::GE, BRel::GT};
	return BFormula::atom(t, rels[uniform_int(rng, 0, 3)], Term::constant(r));
}

inline reachc::BFormula random_e_formula(Rng &rng, const reachc::Assignment &env, int depth)
{
	using reachc::BFormula;
	if (depth <= 0 || uniform_int(rng, 0, 2) == 0)
		return random_e_atom(rng, env);
	BFormula a = random_e_formula(rng, env, depth - 1), b = random_e_formula(rng, env, depth - 1);
	switch (uniform_int(rng, 0, 4)) {
	case 0: return BFormula::conjunction({a, b});
	case 1: return BFormula::disjunction({a, b});
	case 2: return BFormula::negation(a);
	case 3: return BFormula::implies(a, b);
	default: return BFormula::iff(a, b);
	}
}

} // namespace testkit
