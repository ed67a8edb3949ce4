/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/reach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reachc {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double down(double v, int ulps = 1)
{
	for (int i = 0; i < ulps; i++)
		v = std::nextafter(v, -inf);
	return v;
}

double up(double v, int ulps = 1)
{
	for (int i = 0; i < ulps; i++)
		v = std::nextafter(v, inf);
	return v;
}

// products and sums rounded outward only when inexact (error-free transforms)
double mul_down(double a, double b)
{
	double p = a * b;
	return std::isfinite(p) && std::fma(a, b, -p) < 0 ? down(p) : p;
}

double mul_up(double a, double b)
{
	double p = a * b;
	return std::isfinite(p) && std::fma(a, b, -p) > 0 ? up(p) : p;
}

double sum_err(double a, double b, double s)
{
	double bb = s - a;
	return (a - (s - bb)) + (b - bb);
}

double add_down(double a, double b)
{
	double s = a + b;
	return std::isfinite(s) && sum_err(a, b, s) < 0 ? down(s) : s;
}

double add_up(double a, double b)
{
	double s = a + b;
	return std::isfinite(s) && sum_err(a, b, s) > 0 ? up(s) : s;
}

// library transcendental functions are not correctly rounded; a few ulps of
// slack covers them
constexpr int libm_slack = 4;

Interval image(Activation a, Interval x)
{
	switch (a) {
	case Activation::ReLU:
		return {std::max(0.0, x.lo), std::max(0.0, x.hi)};
	case Activation::Identity:
		return x;
	case Activation::Sigmoid:
		return {std::max(0.0, down(activation_apply(a, x.lo), libm_slack)),
		        std::min(1.0, up(activation_apply(a, x.hi), libm_slack))};
	case Activation::Tanh:
		return {std::max(-1.0, down(activation_apply(a, x.lo), libm_slack)),
		        std::min(1.0, up(activation_apply(a, x.hi), libm_slack))};
	case Activation::NLReLU: {
		double lo = x.lo <= 0 ? 0.0 : std::max(0.0, down(activation_apply(a, x.lo), libm_slack));
		double hi = x.hi <= 0 ? 0.0 : up(activation_apply(a, x.hi), libm_slack);
		return {lo, hi};
	}
	}
	return x;
}

// [lo, hi] containing the exact rational q
Interval enclose(const Rational &q)
{
	double d = to_double(q);
	Rational back = exact_rational(d);
	if (back == q)
		return {d, d};
	return back < q ? Interval{d, up(d)} : Interval{down(d), d};
}

} // namespace

std::vector<Interval> interval_bounds_all(const Network &net, const InputBox &box)
{
	if (!net.valid())
		throw ValidationError("invalid network: " + net.errors().front().message);
	if (box.dim() != net.input_dim())
		throw DomainError("box has " + std::to_string(box.dim()) + " intervals, network has " +
		                  std::to_string(net.input_dim()) + " inputs");

	std::vector<Interval> iv;
	iv.reserve(net.size());
	for (const auto &[lo, hi] : box.bounds)
		iv.push_back({enclose(lo).lo, enclose(hi).hi});

	for (std::size_t l = 1; l < net.depth(); l++) {
		for (const Neuron &n : net.layer(l)) {
			Interval b = enclose(n.bias);
			double lo = b.lo, hi = b.hi;
			for (const Edge &e : n.incoming) {
				Interval w = enclose(e.weight);
				const Interval &s = iv[*net.flat_index(e.src)];
				// all four endpoint products, each rounded outward
				double pl = inf, ph = -inf;
				for (double a : {w.lo, w.hi})
					for (double v : {s.lo, s.hi}) {
						if (a == 0 || v == 0) {
							pl = std::min(pl, 0.0);
							ph = std::max(ph, 0.0);
							continue;
						}
						pl = std::min(pl, mul_down(a, v));
						ph = std::max(ph, mul_up(a, v));
					}
				lo = add_down(lo, pl);
				hi = add_up(hi, ph);
			}
			Interval pre{lo, hi};
			iv.push_back(n.activation ? image(*n.activation, pre) : pre);
		}
	}
	return iv;
}

std::vector<Interval> interval_bounds(const Network &net, const InputBox &box)
{
	auto all = interval_bounds_all(net, box);
	return {all.end() - static_cast<std::ptrdiff_t>(net.output_dim()), all.end()};
}

} // namespace reachc
