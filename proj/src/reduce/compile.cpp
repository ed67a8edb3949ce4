/* SPDX-License-Identifier: Apache-2.0 */

#include "build.hpp"

#include "reachc/error.hpp"
#include "reachc/network_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace reachc {

namespace detail {

std::string Draft::fresh(std::string id)
{
	while (!taken.insert(id).second)
		id += '\'';
	return id;
}

namespace {

enum : unsigned { Sound = 1, Weak = 2 };

unsigned flip(unsigned need)
{
	return ((need & Sound) ? Weak : 0u) | ((need & Weak) ? Sound : 0u);
}

} // namespace

Built build_formula(Draft &d, const Formula &g)
{
	using K = Formula::Kind;
	std::vector<Formula> seq = generating_sequence(g);
	std::size_t n = seq.size();

	std::unordered_map<std::string, std::size_t> index;
	for (std::size_t i = 0; i < n; i++)
		index.emplace(seq[i].to_string(), i);

	std::vector<std::vector<std::size_t>> kids(n);
	std::vector<std::vector<std::size_t>> parents(n);
	for (std::size_t i = 0; i < n; i++) {
		if (seq[i].kind() == K::Or || seq[i].kind() == K::False ||
		    (seq[i].kind() == K::Atom && seq[i].as_atom().op != RelOp::GE))
			throw Error("build_formula expects a normalized formula");
		for (std::size_t c = 0; c < seq[i].arity(); c++) {
			std::size_t k = index.at(seq[i].child(c).to_string());
			kids[i].push_back(k);
			parents[k].push_back(i);
		}
	}

	auto fused_not = [&](std::size_t i) {
		return seq[i].kind() == K::Not && seq[kids[i][0]].kind() == K::Atom;
	};

	std::vector<unsigned> need(n, 0);
	need[n - 1] = Sound;
	for (std::size_t i = n; i-- > 0;)
		for (std::size_t k : kids[i])
			need[k] |= seq[i].kind() == K::Not ? flip(need[i]) : need[i];

	// an atom read only by negations lives inside them
	std::vector<bool> materialized(n, true);
	for (std::size_t i = 0; i + 1 < n; i++)
		if (seq[i].kind() == K::Atom)
			materialized[i] = std::any_of(parents[i].begin(), parents[i].end(),
			                              [&](std::size_t p) { return !fused_not(p); });

	auto span = [&](std::size_t i) -> std::size_t { return seq[i].kind() == K::And ? 2 : 1; };
	auto reads = [&](std::size_t i) {
		std::vector<std::size_t> r;
		if (!fused_not(i))
			r = kids[i];
		return r;
	};

	std::vector<std::size_t> height(n, 0);
	for (std::size_t i = 0; i < n; i++) {
		std::size_t h = 0;
		for (std::size_t k : reads(i))
			h = std::max(h, height[k]);
		height[i] = h + span(i);
	}

	// as late as possible: each value sits in the layer just before its
	// earliest consumer
	constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
	std::vector<std::size_t> layer(n, unset);
	layer[n - 1] = d.out_layer + height[n - 1];
	for (std::size_t i = n; i-- > 0;) {
		if (!materialized[i])
			continue;
		for (std::size_t k : reads(i))
			layer[k] = std::min(layer[k], layer[i] - span(i));
	}

	Built out;
	std::vector<std::string> value(n);
	for (std::size_t i = 0; i < n; i++) {
		TraceEntry t;
		t.subformula = seq[i].to_string();
		if (need[i] & Sound)
			t.needs.push_back("sound");
		if (need[i] & Weak)
			t.needs.push_back("weak");
		if (!materialized[i]) {
			t.gadget = "fused";
			out.trace.push_back(std::move(t));
			continue;
		}
		std::string name = d.fresh("phi" + std::to_string(i + 1));
		GadgetOut r;
		switch (seq[i].kind()) {
		case K::True:
			t.gadget = "top";
			r = gadget_top(d.layers, layer[i], d.outputs, name);
			break;
		case K::Atom:
			t.gadget = "atom";
			r = gadget_atom(d.layers, layer[i], d.outputs, seq[i].as_atom(), name);
			break;
		case K::Not:
			if (d.eps.empty())
				throw Error("negation requires an epsilon input");
			if (fused_not(i)) {
				t.gadget = "not-atom";
				r = gadget_not_atom(d.layers, layer[i], d.outputs, seq[kids[i][0]].as_atom(), d.eps,
				                    name);
			} else {
				t.gadget = "not";
				r = gadget_not(d.layers, layer[i], value[kids[i][0]], d.eps, name);
			}
			break;
		case K::And:
			for (const auto &suffix : {".r1", ".r2", ".r3"})
				d.taken.insert(name + suffix);
			if (need[i] & Weak) {
				t.gadget = "and-min";
				r = gadget_and_min(d.layers, layer[i], value[kids[i][0]], value[kids[i][1]], name);
			} else {
				t.gadget = "and";
				r = gadget_and(d.layers, layer[i], value[kids[i][0]], value[kids[i][1]], name);
			}
			break;
		default:
			throw Error("unexpected connective");
		}
		value[i] = r.output;
		t.output = r.output;
		t.neurons = r.neurons;
		out.gadget_neurons += r.neurons.size();
		out.trace.push_back(std::move(t));
	}
	out.root = value[n - 1];
	return out;
}

} // namespace detail

InputBox CompiledQuery::extended_box() const
{
	InputBox b = box;
	b.bounds.emplace_back(exact_rational(eps_min), exact_rational(eps_max));
	return b;
}

CompiledQuery compile(const Network &net, const Formula &f, const InputBox &box, double eps_min)
{
	if (!net.valid())
		throw ValidationError("invalid network: " + net.errors().front().message);
	if (box.dim() != net.input_dim())
		throw ValidationError("box has " + std::to_string(box.dim()) + " intervals, network has " +
		                      std::to_string(net.input_dim()) + " inputs");
	for (const auto &[lo, hi] : box.bounds)
		if (lo > hi)
			throw ValidationError("box interval with lo > hi");
	if (f.min_output_dim() > net.output_dim())
		throw ValidationError("formula references y" + std::to_string(f.min_output_dim()) +
		                      " but the network has " + std::to_string(net.output_dim()) + " outputs");
	if (!(eps_min > 0 && eps_min <= 1))
		throw DomainError("eps_min must lie in (0, 1]");

	CompiledQuery cq;
	cq.formula = normalize(f);
	cq.box = box;
	cq.eps_min = eps_min;
	cq.epsilon_index = net.input_dim();

	detail::Draft d;
	d.layers = net.layers();
	for (const auto &layer : d.layers)
		for (const auto &nr : layer)
			d.taken.insert(nr.id);
	d.eps = d.fresh("eps");
	d.layers[0].push_back(Neuron{d.eps, std::nullopt, Rational(0), {}});
	for (const auto &nr : d.layers.back())
		d.outputs.push_back(nr.id);
	d.out_layer = d.layers.size() - 1;

	detail::Built b = detail::build_formula(d, cq.formula);
	cq.trace = std::move(b.trace);

	Network skip(std::move(d.layers), net.name().empty() ? "reach" : net.name() + "-reach",
	             "N'(x, eps) >= 0 iff N(x) satisfies " + f.to_string());
	if (!skip.valid())
		throw Error("internal: compiled network is invalid: " + skip.errors().front().message);

	LoweringOptions opts;
	for (const auto &[lo, hi] : box.bounds)
		opts.nonnegative_inputs.push_back(lo >= 0);
	opts.nonnegative_inputs.push_back(true);
	Lowering low = lower_skips_traced(skip, opts);
	cq.net_prime = std::move(low.net);

	SizeReport &s = cq.size;
	s.net_size = net.size();
	s.formula_size = cq.formula.size();
	s.base = net.size() + 1;
	s.gadget = b.gadget_neurons;
	for (const auto &a : low.added)
		(a.source == d.eps ? s.epsilon_chain : s.passthrough)++;
	s.total = cq.net_prime.size();
	s.skip_total = skip.size();
	s.bound = s.net_size + 3 * s.formula_size + 2 * cq.net_prime.depth() * (net.output_dim() + 1);
	return cq;
}

SizeReport size_report(const CompiledQuery &cq)
{
	SizeReport s = cq.size;
	s.total = cq.net_prime.size();
	return s;
}

std::vector<double> epsilon_grid(double eps_min)
{
	if (!(eps_min > 0 && eps_min <= 1))
		throw DomainError("eps_min must lie in (0, 1]");
	std::vector<double> g;
	for (int e = 0;; e++) {
		double v = std::pow(10.0, -e);
		if (v < eps_min * (1 - 1e-12))
			break;
		g.push_back(v);
	}
	if (g.back() > eps_min * (1 + 1e-12))
		g.push_back(eps_min);
	return g;
}

bool decide_compiled(const CompiledQuery &cq, std::span<const double> x,
                     std::span<const double> eps_grid)
{
	if (!cq.box.contains(x))
		throw DomainError("point outside the input box");
	Evaluator ev(cq.net_prime);
	std::vector<double> in(x.begin(), x.end());
	in.insert(in.begin() + static_cast<std::ptrdiff_t>(cq.epsilon_index), 0.0);
	for (double eps : eps_grid) {
		in[cq.epsilon_index] = eps;
		if (ev.scalar(in) >= 0)
			return true;
	}
	return false;
}

nlohmann::json size_to_json(const SizeReport &s)
{
	return {{"base", s.base},
	        {"passthrough", s.passthrough},
	        {"gadget", s.gadget},
	        {"epsilon_chain", s.epsilon_chain},
	        {"total", s.total},
	        {"bound", s.bound},
	        {"skip_total", s.skip_total},
	        {"constant", s.constant},
	        {"net_size", s.net_size},
	        {"formula_size", s.formula_size},
	        {"partitions", s.partitions()},
	        {"within_bound", s.within_bound()}};
}

nlohmann::json trace_to_json(const CompiledQuery &cq)
{
	nlohmann::json trace = nlohmann::json::array();
	nlohmann::json map = nlohmann::json::object();
	for (const auto &t : cq.trace) {
		trace.push_back({{"subformula", t.subformula},
		                 {"gadget", t.gadget},
		                 {"output", t.output},
		                 {"neurons", t.neurons},
		                 {"needs", t.needs}});
		map[t.subformula] = t.neurons;
	}
	return {{"v", 1},
	        {"epsilon_index", cq.epsilon_index},
	        {"box", box_to_json(cq.box)["box"]},
	        {"eps_range", {cq.eps_min, cq.eps_max}},
	        {"formula", cq.formula.to_string()},
	        {"trace", trace},
	        {"neurons_by_subformula", map},
	        {"size", size_to_json(cq.size)}};
}

} // namespace reachc
