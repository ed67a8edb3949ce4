/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/compile.hpp"
#include "reachc/error.hpp"

#include <algorithm>

namespace reachc {

namespace {

std::vector<Neuron> &at(Layers &layers, std::size_t l)
{
	if (l >= layers.size())
		layers.resize(l + 1);
	return layers[l];
}

std::string add(Layers &layers, std::size_t l, std::string id, std::optional<Activation> act,
                Rational bias, std::vector<Edge> in)
{
	at(layers, l).push_back(Neuron{id, act, std::move(bias), std::move(in)});
	return id;
}

std::vector<Edge> atom_edges(std::span<const std::string> outputs, const LinAtom &atom, int sign)
{
	std::vector<Edge> in;
	for (const auto &[j, c] : atom.coeffs) {
		if (j >= outputs.size())
			throw ValidationError("atom references y" + std::to_string(j + 1) + " but the network has " +
			                      std::to_string(outputs.size()) + " outputs");
		in.push_back({outputs[j], sign * c});
	}
	return in;
}

} // namespace

GadgetOut gadget_top(Layers &layers, std::size_t layer, std::span<const std::string> outputs,
                     const std::string &name)
{
	std::vector<Edge> in;
	for (const auto &o : outputs)
		in.push_back({o, Rational(0)});
	std::string id = add(layers, layer, name, std::nullopt, Rational(0), std::move(in));
	return {id, {id}};
}

GadgetOut gadget_atom(Layers &layers, std::size_t layer, std::span<const std::string> outputs,
                      const LinAtom &atom, const std::string &name)
{
	std::string id = add(layers, layer, name, std::nullopt, atom.bias, atom_edges(outputs, atom, 1));
	return {id, {id}};
}

GadgetOut gadget_and(Layers &layers, std::size_t layer, const std::string &a, const std::string &b,
                     const std::string &name)
{
	if (layer == 0)
		throw Error("conjunction gadget needs two layers");
	std::string r1 = add(layers, layer - 1, name + ".r1", Activation::ReLU, Rational(0), {{a, Rational(-1)}});
	std::string r2 = add(layers, layer - 1, name + ".r2", Activation::ReLU, Rational(0), {{b, Rational(-1)}});
	std::string id = add(layers, layer, name, std::nullopt, Rational(0),
	                     {{r1, Rational(-1)}, {r2, Rational(-1)}});
	return {id, {r1, r2, id}};
}

GadgetOut gadget_and_min(Layers &layers, std::size_t layer, const std::string &a,
                         const std::string &b, const std::string &name)
{
	if (layer == 0)
		throw Error("conjunction gadget needs two layers");
	std::string r1 = add(layers, layer - 1, name + ".r1", Activation::ReLU, Rational(0), {{a, Rational(1)}});
	std::string r2 = add(layers, layer - 1, name + ".r2", Activation::ReLU, Rational(0), {{a, Rational(-1)}});
	std::string r3 = add(layers, layer - 1, name + ".r3", Activation::ReLU, Rational(0),
	                     {{a, Rational(1)}, {b, Rational(-1)}});
	std::string id = add(layers, layer, name, std::nullopt, Rational(0),
	                     {{r1, Rational(1)}, {r2, Rational(-1)}, {r3, Rational(-1)}});
	return {id, {r1, r2, r3, id}};
}

GadgetOut gadget_not(Layers &layers, std::size_t layer, const std::string &a, const std::string &eps,
                     const std::string &name)
{
	std::string id = add(layers, layer, name, std::nullopt, Rational(0),
	                     {{eps, Rational(-1)}, {a, Rational(-1)}});
	return {id, {id}};
}

GadgetOut gadget_not_atom(Layers &layers, std::size_t layer, std::span<const std::string> outputs,
                          const LinAtom &atom, const std::string &eps, const std::string &name)
{
	std::vector<Edge> in{{eps, Rational(-1)}};
	for (auto &e : atom_edges(outputs, atom, -1))
		in.push_back(std::move(e));
	std::string id = add(layers, layer, name, std::nullopt, -atom.bias, std::move(in));
	return {id, {id}};
}

double and_value(double a, double b)
{
	return -std::max(0.0, -a) - std::max(0.0, -b);
}

double and_min_value(double a, double b)
{
	return std::max(0.0, a) - std::max(0.0, -a) - std::max(0.0, a - b);
}

double not_value(double a, double eps)
{
	return -eps - a;
}

} // namespace reachc
