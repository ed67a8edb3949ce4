/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/compile.hpp"

#include <unordered_set>

namespace reachc::detail {

// Network under construction: skip edges allowed, outputs of the source
// network(s) readable as y1..yk.
struct Draft {
	Layers layers;
	std::vector<std::string> outputs;
	std::size_t out_layer = 0;
	std::string eps;  // empty when no negation may occur
	std::unordered_set<std::string> taken;

	std::string fresh(std::string id);
};

struct Built {
	std::string root;
	std::vector<TraceEntry> trace;
	std::size_t gadget_neurons = 0;
};

// Appends the gadgets for a normalized formula; the root value ends up
// alone in the final layer.
Built build_formula(Draft &d, const Formula &normalized);

} // namespace reachc::detail
