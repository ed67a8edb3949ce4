/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace reachc {

enum class Activation { ReLU, Sigmoid, Tanh, NLReLU, Identity };

std::string_view to_string(Activation a);
std::optional<Activation> activation_from_string(std::string_view s);

/// Value of the activation at x. Sigmoid uses the branch form that never
/// overflows; NLReLU is ln(ReLU(x)+1). Throws DomainError for non-finite x.
double activation_apply(Activation a, double x);

/// True when the activation's range is contained in [0, inf).
bool nonnegative_range(Activation a);

struct Edge {
	std::string src;
	Rational weight;

	friend bool operator==(const Edge &, const Edge &) = default;
};

/// A neuron without activation is affine. Input and output neurons are
/// always affine; hidden affine neurons appear in compiled networks.
struct Neuron {
	std::string id;
	std::optional<Activation> activation;
	Rational bias;
	std::vector<Edge> incoming;

	friend bool operator==(const Neuron &, const Neuron &) = default;
};

struct StructuralError {
	std::string code;    // e.g. "backward edge", "output activation"
	std::string message;
};

/// Closed per-input interval box with rational endpoints.
struct InputBox {
	std::vector<std::pair<Rational, Rational>> bounds;

	std::size_t dim() const noexcept { return bounds.size(); }
	bool contains(std::span<const double> x) const;
	static InputBox unit(std::size_t m);

	friend bool operator==(const InputBox &, const InputBox &) = default;
};

/// Feed-forward network as a layered DAG. Layer 0 holds the inputs, the
/// last layer the outputs. Edges point from any strictly earlier layer, so
/// skip connections are representable; `lower_skips` removes them.
///
/// Values are immutable. Validation and the evaluation plan are computed once
/// at construction, so a Network may be evaluated concurrently.
class Network {
public:
	Network() = default;
	explicit Network(std::vector<std::vector<Neuron>> layers, std::string name = {},
	                 std::string notes = {});

	const std::vector<std::vector<Neuron>> &layers() const noexcept { return layers_; }
	const std::vector<Neuron> &layer(std::size_t i) const { return layers_.at(i); }
	std::size_t depth() const noexcept { return layers_.size(); }
	std::size_t input_dim() const noexcept { return layers_.empty() ? 0 : layers_.front().size(); }
	std::size_t output_dim() const noexcept { return layers_.empty() ? 0 : layers_.back().size(); }
	/// Total neuron count, inputs included.
	std::size_t size() const noexcept { return size_; }

	const std::string &name() const noexcept { return name_; }
	const std::string &notes() const noexcept { return notes_; }

	/// (layer, index) of a neuron id.
	std::optional<std::pair<std::size_t, std::size_t>> locate(std::string_view id) const;
	/// Position of a neuron in layer-major order.
	std::optional<std::size_t> flat_index(std::string_view id) const;

	const std::vector<StructuralError> &errors() const noexcept { return errors_; }
	bool valid() const noexcept { return errors_.empty(); }
	bool has_skip_edges() const noexcept { return has_skips_; }

	friend bool operator==(const Network &a, const Network &b)
	{
		return a.layers_ == b.layers_ && a.name_ == b.name_ && a.notes_ == b.notes_;
	}

private:
	friend class Evaluator;

	struct PlanEdge {
		std::size_t src;
		double w;
	};
	struct PlanNode {
		std::size_t first_edge, end_edge;
		double bias;
		std::optional<Activation> activation;
	};

	void analyse();

	std::vector<std::vector<Neuron>> layers_;
	std::string name_, notes_;
	std::size_t size_ = 0;
	bool has_skips_ = false;
	std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> index_;
	std::vector<StructuralError> errors_;
	std::vector<std::size_t> layer_offset_;
	std::vector<PlanNode> plan_;
	std::vector<PlanEdge> plan_edges_;
};

/// Exhaustive list of structural problems; empty when the network is valid.
std::vector<StructuralError> validate(const Network &net);

/// Forward evaluation. Throws ValidationError for invalid networks and
/// DomainError on dimension mismatch.
std::vector<double> eval(const Network &net, std::span<const double> x);

/// Values of every neuron in layer-major order.
std::vector<double> eval_all(const Network &net, std::span<const double> x);

/// Reusable evaluator that keeps its scratch buffer between calls.
class Evaluator {
public:
	explicit Evaluator(const Network &net);

	/// Output vector; the returned span is valid until the next call.
	std::span<const double> operator()(std::span<const double> x);
	/// Convenience for scalar-output networks.
	double scalar(std::span<const double> x) { return (*this)(x)[0]; }

	/// Every neuron value of the last evaluation, layer-major.
	std::span<const double> values() const noexcept { return values_; }
	const Network &network() const noexcept { return *net_; }

private:
	const Network *net_;
	std::vector<double> values_;
};

struct LoweringOptions {
	/// Per-input sign knowledge; empty means every input is non-negative (the
	/// normalized [0,1]^m domain).
	std::vector<bool> nonnegative_inputs;
};

struct ForwardedNeuron {
	std::string id;
	std::string source;
};

struct Lowering {
	Network net;
	std::vector<ForwardedNeuron> added;
};

/// Rewrites every skip edge into adjacent-layer edges. Non-negative sources
/// are forwarded through single ReLU neurons of weight 1; signed sources
/// through the pair ReLU(v), ReLU(-v) per crossed layer. A chain is shared by
/// all consumers of the same source.
Lowering lower_skips_traced(const Network &net, const LoweringOptions &opts = {});
Network lower_skips(const Network &net, const LoweringOptions &opts = {});

} // namespace reachc
