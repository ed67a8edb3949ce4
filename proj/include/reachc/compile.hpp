/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/formula.hpp"
#include "reachc/network.hpp"

#include "json.hpp"

#include <span>
#include <string>
#include <vector>

namespace reachc {

using Layers = std::vector<std::vector<Neuron>>;

/*
 * Gadget builders. Each appends neurons to `layers` (which may still contain
 * skip edges) and returns the id of the neuron carrying the subformula value
 * plus every neuron it created. `layer` is the layer of that result neuron;
 * two-layer gadgets also use layer - 1. New ids are `name` plus a suffix.
 */
struct GadgetOut {
	std::string output;
	std::vector<std::string> neurons;
};

/// One affine neuron with zero-weight edges from every output; value 0.
GadgetOut gadget_top(Layers &layers, std::size_t layer, std::span<const std::string> outputs,
                     const std::string &name);
/// One affine neuron: weight c_j from output j, bias b.
GadgetOut gadget_atom(Layers &layers, std::size_t layer, std::span<const std::string> outputs,
                      const LinAtom &atom, const std::string &name);
/// -ReLU(-a) - ReLU(-b): two ReLU neurons in layer-1, affine result in layer.
GadgetOut gadget_and(Layers &layers, std::size_t layer, const std::string &a, const std::string &b,
                     const std::string &name);
/// min(a, b) = ReLU(a) - ReLU(-a) - ReLU(a - b): three ReLU neurons, affine result.
GadgetOut gadget_and_min(Layers &layers, std::size_t layer, const std::string &a,
                         const std::string &b, const std::string &name);
/// -eps - a.
GadgetOut gadget_not(Layers &layers, std::size_t layer, const std::string &a, const std::string &eps,
                     const std::string &name);
/// -eps - (sum c_j y_j + b): negation of an atom in one neuron.
GadgetOut gadget_not_atom(Layers &layers, std::size_t layer, std::span<const std::string> outputs,
                          const LinAtom &atom, const std::string &eps, const std::string &name);

/// Reference values of the gadget arithmetic.
double and_value(double a, double b);
double and_min_value(double a, double b);
double not_value(double a, double eps);

struct TraceEntry {
	std::string subformula;
	std::string gadget;  // "top", "atom", "and", "and-min", "not", "not-atom", "fused"
	std::string output;  // empty for atoms fused into their negation
	std::vector<std::string> neurons;
	std::vector<std::string> needs;  // polarity requirements: "sound", "weak"
};

struct SizeReport {
	std::size_t base = 0;          // original neurons plus the epsilon input
	std::size_t passthrough = 0;   // forwarding neurons for outputs and gadget values
	std::size_t gadget = 0;
	std::size_t epsilon_chain = 0;
	std::size_t total = 0;
	/// size(N) + 3 size(phi) + 2 depth(N') (k + 1)
	std::size_t bound = 0;
	/// Size before skip lowering and the constant C with skip_total <= C (|N| + |phi|).
	std::size_t skip_total = 0;
	std::size_t constant = 4;
	std::size_t net_size = 0, formula_size = 0;

	bool partitions() const { return base + passthrough + gadget + epsilon_chain == total; }
	bool within_bound() const { return total <= bound && skip_total <= constant * (net_size + formula_size); }
};

struct CompiledQuery {
	Network net_prime;
	std::size_t epsilon_index = 0;
	InputBox box;  // over the m original inputs
	double eps_min = 1e-6;
	double eps_max = 1.0;
	Formula formula = Formula::top();  // normalized
	std::vector<TraceEntry> trace;
	SizeReport size;

	/// box x [eps_min, eps_max]
	InputBox extended_box() const;
};

/// Builds N' with N'(x, eps) >= 0 for some eps in (0,1] iff N(x) satisfies f.
/// Throws ValidationError for invalid networks, boxes of the wrong dimension,
/// or formulas referencing missing outputs.
CompiledQuery compile(const Network &net, const Formula &f, const InputBox &box,
                      double eps_min = 1e-6);

SizeReport size_report(const CompiledQuery &cq);

/// {1, 1e-1, ...} down to eps_min (included).
std::vector<double> epsilon_grid(double eps_min = 1e-6);

/// max over eps in grid of N'(x, eps) >= 0. Throws DomainError if x is
/// outside the box.
bool decide_compiled(const CompiledQuery &cq, std::span<const double> x,
                     std::span<const double> eps_grid);

/// Network with shared inputs and disjoint copies of n1 and n2 whose scalar
/// output is >= 0 iff n1(x) = n2(x) (-|y1 - y2| for scalar outputs).
Network equiv_reduce(const Network &n1, const Network &n2);

/// Sidecar description: epsilon index, box, eps range, trace, size report.
nlohmann::json trace_to_json(const CompiledQuery &cq);
nlohmann::json size_to_json(const SizeReport &s);

} // namespace reachc
