/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/network.hpp"

#include <cmath>

namespace reachc {

bool InputBox::contains(std::span<const double> x) const
{
	if (x.size() != bounds.size())
		return false;
	for (std::size_t i = 0; i < x.size(); i++)
		if (x[i] < to_double(bounds[i].first) || x[i] > to_double(bounds[i].second))
			return false;
	return true;
}

InputBox InputBox::unit(std::size_t m)
{
	return InputBox{std::vector<std::pair<Rational, Rational>>(m, {Rational(0), Rational(1)})};
}

Network::Network(std::vector<std::vector<Neuron>> layers, std::string name, std::string notes)
: layers_(std::move(layers)), name_(std::move(name)), notes_(std::move(notes))
{
	analyse();
}

void Network::analyse()
{
	auto err = [this](std::string code, std::string msg) {
		errors_.push_back({std::move(code), std::move(msg)});
	};

	layer_offset_.clear();
	size_ = 0;
	for (std::size_t l = 0; l < layers_.size(); l++) {
		layer_offset_.push_back(size_);
		size_ += layers_[l].size();
		for (std::size_t j = 0; j < layers_[l].size(); j++) {
			const Neuron &n = layers_[l][j];
			if (n.id.empty())
				err("empty id", "neuron " + std::to_string(j) + " of layer " +
				                    std::to_string(l) + " has an empty id");
			else if (!index_.emplace(n.id, std::pair{l, j}).second)
				err("duplicate id", "neuron id '" + n.id + "' is used more than once");
		}
	}

	if (layers_.size() < 2) {
		err("too few layers", "a network needs an input and an output layer");
		return;
	}
	for (std::size_t l = 0; l < layers_.size(); l++)
		if (layers_[l].empty())
			err("empty layer", "layer " + std::to_string(l) + " has no neurons");

	for (const Neuron &n : layers_.front()) {
		if (!n.incoming.empty())
			err("input incoming", "input neuron '" + n.id + "' has incoming edges");
		if (n.activation)
			err("input activation", "input neuron '" + n.id + "' has an activation");
		if (n.bias != 0)
			err("input bias", "input neuron '" + n.id + "' has a nonzero bias");
	}
	for (const Neuron &n : layers_.back())
		if (n.activation)
			err("output activation", "output neuron '" + n.id + "' carries activation " +
			                             std::string(to_string(*n.activation)));

	for (std::size_t l = 1; l < layers_.size(); l++) {
		for (const Neuron &n : layers_[l]) {
			for (const Edge &e : n.incoming) {
				auto it = index_.find(e.src);
				if (it == index_.end()) {
					err("unknown source", "neuron '" + n.id + "' reads unknown neuron '" +
					                          e.src + "'");
					continue;
				}
				std::size_t sl = it->second.first;
				if (sl >= l)
					err("backward edge", "edge '" + e.src + "' (layer " + std::to_string(sl) +
					                         ") -> '" + n.id + "' (layer " + std::to_string(l) +
					                         ") does not point forward");
				else if (sl + 1 < l)
					has_skips_ = true;
			}
		}
	}

	if (!errors_.empty())
		return;

	plan_.reserve(size_);
	for (std::size_t l = 0; l < layers_.size(); l++) {
		for (const Neuron &n : layers_[l]) {
			PlanNode p{plan_edges_.size(), plan_edges_.size(), to_double(n.bias), n.activation};
			for (const Edge &e : n.incoming) {
				auto [sl, sj] = index_.at(e.src);
				plan_edges_.push_back({layer_offset_[sl] + sj, to_double(e.weight)});
			}
			p.end_edge = plan_edges_.size();
			plan_.push_back(p);
		}
	}
}

std::optional<std::pair<std::size_t, std::size_t>> Network::locate(std::string_view id) const
{
	auto it = index_.find(std::string(id));
	if (it == index_.end())
		return std::nullopt;
	return it->second;
}

std::optional<std::size_t> Network::flat_index(std::string_view id) const
{
	auto loc = locate(id);
	if (!loc)
		return std::nullopt;
	return layer_offset_[loc->first] + loc->second;
}

std::vector<StructuralError> validate(const Network &net)
{
	return net.errors();
}

Evaluator::Evaluator(const Network &net) : net_(&net)
{
	if (!net.valid())
		throw ValidationError("cannot evaluate invalid network: " + net.errors().front().message);
	values_.resize(net.size());
}

std::span<const double> Evaluator::operator()(std::span<const double> x)
{
	const Network &net = *net_;
	std::size_t m = net.input_dim();
	if (x.size() != m)
		throw DomainError("input has dimension " + std::to_string(x.size()) + ", network expects " +
		                  std::to_string(m));
	for (std::size_t i = 0; i < m; i++) {
		if (!std::isfinite(x[i]))
			throw DomainError("non-finite network input");
		values_[i] = x[i];
	}
	for (std::size_t i = m; i < net.plan_.size(); i++) {
		const auto &p = net.plan_[i];
		double s = p.bias;
		for (std::size_t e = p.first_edge; e < p.end_edge; e++)
			s += net.plan_edges_[e].w * values_[net.plan_edges_[e].src];
		values_[i] = p.activation ? activation_apply(*p.activation, s) : s;
	}
	return std::span<const double>(values_).last(net.output_dim());
}

std::vector<double> eval(const Network &net, std::span<const double> x)
{
	Evaluator ev(net);
	auto out = ev(x);
	return {out.begin(), out.end()};
}

std::vector<double> eval_all(const Network &net, std::span<const double> x)
{
	Evaluator ev(net);
	ev(x);
	auto all = ev.values();
	return {all.begin(), all.end()};
}

} // namespace reachc
