/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/network.hpp"

#include <cmath>

namespace reachc {

std::string_view to_string(Activation a)
{
	switch (a) {
	case Activation::ReLU: return "relu";
	case Activation::Sigmoid: return "sigmoid";
	case Activation::Tanh: return "tanh";
	case Activation::NLReLU: return "nlrelu";
	case Activation::Identity: return "identity";
	}
	return "?";
}

std::optional<Activation> activation_from_string(std::string_view s)
{
	if (s == "relu") return Activation::ReLU;
	if (s == "sigmoid") return Activation::Sigmoid;
	if (s == "tanh") return Activation::Tanh;
	if (s == "nlrelu") return Activation::NLReLU;
	if (s == "identity") return Activation::Identity;
	return std::nullopt;
}

double activation_apply(Activation a, double x)
{
	if (!std::isfinite(x))
		throw DomainError("activation applied to non-finite value");
	switch (a) {
	case Activation::ReLU:
		return x > 0 ? x : 0.0;
	case Activation::Sigmoid:
		if (x >= 0)
			return 1.0 / (1.0 + std::exp(-x));
		else {
			double e = std::exp(x);
			return e / (1.0 + e);
		}
	case Activation::Tanh:
		return std::tanh(x);
	case Activation::NLReLU:
		return x > 0 ? std::log1p(x) : 0.0;
	case Activation::Identity:
		return x;
	}
	return x;
}

bool nonnegative_range(Activation a)
{
	return a == Activation::ReLU || a == Activation::Sigmoid || a == Activation::NLReLU;
}

} // namespace reachc
