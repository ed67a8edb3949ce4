/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/reach.hpp"

#include <unordered_set>

namespace reachc {

std::pair<Network, InputBox> normalize_box(const Network &net, const InputBox &box)
{
	if (!net.valid())
		throw ValidationError("invalid network: " + net.errors().front().message);
	if (box.dim() != net.input_dim())
		throw ValidationError("box has " + std::to_string(box.dim()) + " intervals, network has " +
		                      std::to_string(net.input_dim()) + " inputs");

	std::unordered_set<std::string> taken;
	for (const auto &layer : net.layers())
		for (const auto &n : layer)
			taken.insert(n.id);

	std::vector<std::vector<Neuron>> layers;
	layers.reserve(net.depth() + 1);
	layers.emplace_back();
	layers.emplace_back();
	for (std::size_t i = 0; i < net.input_dim(); i++) {
		std::string u = "u" + std::to_string(i + 1);
		while (!taken.insert(u).second)
			u += '\'';
		const auto &[lo, hi] = box.bounds[i];
		if (lo > hi)
			throw ValidationError("box interval " + std::to_string(i + 1) + " has lo > hi");
		layers[0].push_back(Neuron{u, std::nullopt, Rational(0), {}});
		layers[1].push_back(Neuron{net.layer(0)[i].id, std::nullopt, lo, {{u, Rational(hi - lo)}}});
	}
	for (std::size_t l = 1; l < net.depth(); l++)
		layers.push_back(net.layer(l));

	return {Network(std::move(layers), net.name(), net.notes()), InputBox::unit(net.input_dim())};
}

} // namespace reachc
