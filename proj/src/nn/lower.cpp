/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/network.hpp"

#include <map>
#include <unordered_set>

namespace reachc {

namespace {

struct Chain {
	bool nonnegative = false;
	std::size_t origin = 0;           // layer of the source
	std::vector<std::string> pos, neg; // pos[t - origin - 1] lives in layer t
};

} // namespace

Lowering lower_skips_traced(const Network &net, const LoweringOptions &opts)
{
	if (!net.valid())
		throw ValidationError("cannot lower invalid network: " + net.errors().front().message);
	if (!opts.nonnegative_inputs.empty() && opts.nonnegative_inputs.size() != net.input_dim())
		throw DomainError("sign flags given for " + std::to_string(opts.nonnegative_inputs.size()) +
		                  " inputs, network has " + std::to_string(net.input_dim()));

	Lowering out;
	if (!net.has_skip_edges()) {
		out.net = net;
		return out;
	}

	auto layers = net.layers();
	std::unordered_set<std::string> taken;
	for (const auto &layer : layers)
		for (const auto &n : layer)
			taken.insert(n.id);
	auto fresh = [&](std::string id) {
		while (!taken.insert(id).second)
			id += '\'';
		return id;
	};

	auto is_nonnegative = [&](std::size_t layer, std::size_t idx) {
		if (layer == 0)
			return opts.nonnegative_inputs.empty() || opts.nonnegative_inputs[idx];
		const auto &a = net.layer(layer)[idx].activation;
		return a && nonnegative_range(*a);
	};

	std::map<std::string, Chain> chains;

	// forwards `src` so that it is readable from layer `upto`
	auto extend = [&](const std::string &src, std::size_t upto) -> Chain & {
		auto [sl, sj] = *net.locate(src);
		auto [it, inserted] = chains.try_emplace(src);
		Chain &c = it->second;
		if (inserted) {
			c.nonnegative = is_nonnegative(sl, sj);
			c.origin = sl;
		}
		for (std::size_t t = c.origin + 1 + c.pos.size(); t <= upto; t++) {
			if (c.nonnegative) {
				std::string prev = c.pos.empty() ? src : c.pos.back();
				std::string id = fresh(src + "@" + std::to_string(t));
				layers[t].push_back(Neuron{id, Activation::ReLU, Rational(0), {{prev, Rational(1)}}});
				out.added.push_back({id, src});
				c.pos.push_back(id);
			} else {
				std::string pid = fresh(src + "@" + std::to_string(t) + "+");
				std::string nid = fresh(src + "@" + std::to_string(t) + "-");
				if (c.pos.empty()) {
					layers[t].push_back(Neuron{pid, Activation::ReLU, Rational(0), {{src, Rational(1)}}});
					layers[t].push_back(Neuron{nid, Activation::ReLU, Rational(0), {{src, Rational(-1)}}});
				} else {
					layers[t].push_back(
						Neuron{pid, Activation::ReLU, Rational(0), {{c.pos.back(), Rational(1)}}});
					layers[t].push_back(
						Neuron{nid, Activation::ReLU, Rational(0), {{c.neg.back(), Rational(1)}}});
				}
				out.added.push_back({pid, src});
				out.added.push_back({nid, src});
				c.pos.push_back(pid);
				c.neg.push_back(nid);
			}
		}
		return c;
	};

	for (std::size_t l = 2; l < layers.size(); l++) {
		// only the original neurons of this layer can carry skip edges
		std::size_t original = net.layer(l).size();
		for (std::size_t j = 0; j < original; j++) {
			std::vector<Edge> rewritten;
			for (const Edge &e : layers[l][j].incoming) {
				std::size_t sl = net.locate(e.src)->first;
				if (sl + 1 == l) {
					rewritten.push_back(e);
					continue;
				}
				Chain &c = extend(e.src, l - 1);
				std::size_t k = l - 1 - c.origin - 1;
				rewritten.push_back({c.pos[k], e.weight});
				if (!c.nonnegative)
					rewritten.push_back({c.neg[k], -e.weight});
			}
			layers[l][j].incoming = std::move(rewritten);
		}
	}

	out.net = Network(std::move(layers), net.name(), net.notes());
	return out;
}

Network lower_skips(const Network &net, const LoweringOptions &opts)
{
	return lower_skips_traced(net, opts).net;
}

} // namespace reachc
