/* SPDX-License-Identifier: Apache-2.0 */

#include "build.hpp"

#include "reachc/error.hpp"

#include <unordered_map>

namespace reachc {

Network equiv_reduce(const Network &n1, const Network &n2)
{
	for (const Network *n : {&n1, &n2})
		if (!n->valid())
			throw ValidationError("invalid network: " + n->errors().front().message);
	if (n1.input_dim() != n2.input_dim())
		throw ValidationError("input dimensions differ: " + std::to_string(n1.input_dim()) + " vs " +
		                      std::to_string(n2.input_dim()));
	if (n1.output_dim() != n2.output_dim())
		throw ValidationError("output dimensions differ: " + std::to_string(n1.output_dim()) + " vs " +
		                      std::to_string(n2.output_dim()));

	detail::Draft d;
	d.layers.resize(std::max(n1.depth(), n2.depth()));
	for (const auto &in : n1.layer(0)) {
		d.layers[0].push_back(in);
		d.taken.insert(in.id);
	}

	auto copy = [&](const Network &n, const std::string &prefix) {
		std::unordered_map<std::string, std::string> ren;
		for (std::size_t i = 0; i < n.input_dim(); i++)
			ren[n.layer(0)[i].id] = n1.layer(0)[i].id;
		for (std::size_t l = 1; l < n.depth(); l++)
			for (const auto &nr : n.layer(l))
				ren[nr.id] = d.fresh(prefix + nr.id);
		for (std::size_t l = 1; l < n.depth(); l++) {
			for (Neuron nr : n.layer(l)) {
				nr.id = ren.at(nr.id);
				for (auto &e : nr.incoming)
					e.src = ren.at(e.src);
				d.layers[l].push_back(std::move(nr));
			}
		}
		for (const auto &nr : n.layers().back())
			d.outputs.push_back(ren.at(nr.id));
	};
	copy(n1, "a:");
	copy(n2, "b:");
	d.out_layer = d.layers.size() - 1;

	std::size_t k = n1.output_dim();
	Formula f = Formula::top();
	for (std::size_t j = 0; j < k; j++) {
		LinAtom eq{{{j, Rational(1)}, {k + j, Rational(-1)}}, Rational(0), RelOp::EQ};
		f = j == 0 ? Formula::atom(eq) : Formula::conjunction(f, Formula::atom(eq));
	}
	detail::build_formula(d, normalize(f));

	Network skip(std::move(d.layers), "equiv", "output >= 0 iff both networks agree");
	if (!skip.valid())
		throw Error("internal: reduced network is invalid: " + skip.errors().front().message);
	LoweringOptions opts;
	opts.nonnegative_inputs.assign(n1.input_dim(), false);
	return lower_skips(skip, opts);
}

} // namespace reachc
