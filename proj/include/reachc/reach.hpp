/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/network.hpp"

#include "json.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace reachc {

/// Prepends an affine layer x = lo + (hi - lo) u so the returned network is
/// read on [0,1]^m. Degenerate intervals become constant neurons.
std::pair<Network, InputBox> normalize_box(const Network &net, const InputBox &box);

struct Interval {
	double lo = 0, hi = 0;
	bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Sound enclosure of every neuron value (layer-major) over the box,
/// computed with outward rounding.
std::vector<Interval> interval_bounds_all(const Network &net, const InputBox &box);
/// Enclosure of the outputs.
std::vector<Interval> interval_bounds(const Network &net, const InputBox &box);

struct ReachOptions {
	double eps_tol = 1e-3;
	long long budget = 100000;  // network evaluations
	std::uint64_t seed = 0;
	bool deterministic = false;
	/// Worker threads for the ascent phase; 0 takes REACHC_THREADS or the
	/// hardware concurrency. Results do not depend on this value.
	unsigned threads = 0;
};

struct Verdict {
	enum class Kind { Reachable, Unreachable, Unknown };

	Kind kind = Kind::Unknown;
	std::vector<double> witness;  // Reachable: the witness; Unknown: best point
	double value = 0;             // network value at the witness / best point
	double upper_bound = 0;       // interval upper bound of the output
	long long evals = 0;
};

std::string_view to_string(Verdict::Kind k);

/// Interval refutation, then Halton sampling and projected multistart ascent.
/// Reachable means a re-verified witness with value >= -eps_tol; Unreachable
/// means a certified upper bound < 0. Throws DomainError for budget <= 0,
/// eps_tol <= 0, non-scalar networks or a box of the wrong dimension.
Verdict decide_reach(const Network &net, const InputBox &box, const ReachOptions &opts = {});

/// {"v":1, "verdict", "witness"?, "value"?, "upper_bound", "evals"}
nlohmann::json verdict_to_json(const Verdict &v);

} // namespace reachc
