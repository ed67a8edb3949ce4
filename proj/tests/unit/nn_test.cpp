/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/network.hpp"
#include "reachc/network_io.hpp"

#include "../support/testkit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace reachc;
using testkit::Rng;

namespace {

std::filesystem::path temp_file(const std::string &name)
{
	return std::filesystem::temp_directory_path() / ("reachc_nn_" + name);
}

bool has_code(const Network &n, const std::string &code)
{
	for (const auto &e : n.errors())
		if (e.code == code)
			return true;
	return false;
}

} // namespace

TEST(Activation, Examples)
{
	EXPECT_EQ(activation_apply(Activation::ReLU, -1), 0.0);
	EXPECT_EQ(activation_apply(Activation::Sigmoid, 0), 0.5);
	EXPECT_NEAR(activation_apply(Activation::NLReLU, std::exp(1.0) - 1), 1.0, 1e-15);
	EXPECT_EQ(activation_apply(Activation::Identity, -3.5), -3.5);
}

TEST(Activation, RejectsNonFinite)
{
	EXPECT_THROW(activation_apply(Activation::ReLU, std::nan("")), DomainError);
	EXPECT_THROW(activation_apply(Activation::Sigmoid, INFINITY), DomainError);
}

TEST(Activation, Identities)
{
	Rng rng(7);
	for (int i = 0; i < 10000; i++) {
		double x = testkit::uniform(rng, -40, 40);
		EXPECT_EQ(activation_apply(Activation::ReLU, x), std::max(0.0, x));
		EXPECT_NEAR(activation_apply(Activation::Sigmoid, x) + activation_apply(Activation::Sigmoid, -x), 1.0, 1e-12);
		EXPECT_NEAR(activation_apply(Activation::Tanh, -x), -activation_apply(Activation::Tanh, x), 1e-12);
		double s = activation_apply(Activation::Sigmoid, x / 10);
		EXPECT_GT(s, 0.0);
		EXPECT_LT(s, 1.0);
		if (x <= 0)
			EXPECT_EQ(activation_apply(Activation::NLReLU, x), 0.0);
		double y = 1 + std::fabs(x);
		EXPECT_NEAR(activation_apply(Activation::NLReLU, y - 1), std::log(y), 1e-12);
	}
}

TEST(Activation, SigmoidExtremeInputs)
{
	EXPECT_EQ(activation_apply(Activation::Sigmoid, -1000), 0.0);
	EXPECT_EQ(activation_apply(Activation::Sigmoid, 1000), 1.0);
}

TEST(Network, ToyEvaluation)
{
	Network net = testkit::fig1();
	ASSERT_TRUE(net.valid());
	std::vector<double> x{1, 2, 1};
	auto y = eval(net, x);
	ASSERT_EQ(y.size(), 1u);
	EXPECT_NEAR(y[0], 4 / (1 + std::exp(1.0)), 1e-12);
	EXPECT_EQ(net.size(), 7u);
}

TEST(Network, ZeroWeightsGiveZero)
{
	Rng rng(3);
	testkit::NetShape s;
	s.inputs = 3;
	s.outputs = 2;
	s.activations = {Activation::ReLU, Activation::Tanh, Activation::NLReLU};
	Network r = testkit::random_network(rng, s);
	auto layers = r.layers();
	for (auto &layer : layers)
		for (auto &n : layer) {
			n.bias = 0;
			for (auto &e : n.incoming)
				e.weight = 0;
		}
	Network z(layers);
	for (int i = 0; i < 20; i++) {
		auto x = testkit::sample_in(rng, InputBox::unit(3));
		for (double v : eval(z, x))
			EXPECT_EQ(v, 0.0);
	}
}

TEST(Network, EvalIsPure)
{
	Network net = testkit::fig1();
	std::vector<double> x{0.3, 0.7, 0.1};
	auto a = eval(net, x), b = eval(net, x);
	EXPECT_EQ(a, b);
	Evaluator ev(net);
	double c = ev.scalar(x);
	ev.scalar(std::vector<double>{1, 1, 1});
	EXPECT_EQ(ev.scalar(x), c);
}

TEST(Network, EvalErrors)
{
	Network net = testkit::fig1();
	EXPECT_THROW(eval(net, std::vector<double>{1, 2}), DomainError);
	Network bad({{{"x1", {}, 0, {}}}, {{"y", Activation::ReLU, 0, {{"x1", 1}}}}});
	EXPECT_THROW(eval(bad, std::vector<double>{1}), ValidationError);
}

TEST(Validate, Toy)
{
	EXPECT_TRUE(validate(testkit::fig1()).empty());
}

TEST(Validate, BackwardEdge)
{
	using V = std::vector<Neuron>;
	Network n({V{{"x1", {}, 0, {}}},
	           V{{"a", Activation::ReLU, 0, {{"x1", 1}, {"b", 1}}}},
	           V{{"b", Activation::ReLU, 0, {{"a", 1}}}},
	           V{{"y", {}, 0, {{"b", 1}}}}});
	EXPECT_TRUE(has_code(n, "backward edge"));
}

TEST(Validate, OutputActivation)
{
	using V = std::vector<Neuron>;
	Network n({V{{"x1", {}, 0, {}}}, V{{"y", Activation::Sigmoid, 0, {{"x1", 1}}}}});
	EXPECT_TRUE(has_code(n, "output activation"));
}

TEST(Validate, ReportsEveryProblem)
{
	using V = std::vector<Neuron>;
	Network n({V{{"x1", Activation::ReLU, 1, {}}},
	           V{{"a", Activation::ReLU, 0, {{"ghost", 1}}}, {"a", Activation::ReLU, 0, {}}},
	           V{{"y", Activation::ReLU, 0, {{"a", 1}}}}});
	for (const char *code : {"input activation", "input bias", "unknown source", "duplicate id", "output activation"})
		EXPECT_TRUE(has_code(n, code)) << code;
}

TEST(Validate, TooFewLayers)
{
	Network n({{{"x1", {}, 0, {}}}});
	EXPECT_TRUE(has_code(n, "too few layers"));
}

namespace {

Network one_skip()
{
	using V = std::vector<Neuron>;
	return Network({V{{"x1", {}, 0, {}}},
	                V{{"h", Activation::ReLU, 1, {{"x1", 2}}}},
	                V{{"g", Activation::ReLU, 0, {{"h", -1}}}},
	                V{{"y", {}, 0, {{"g", 1}, {"h", 3}}}}});
}

} // namespace

TEST(Lower, PositiveSourceAddsOneNeuron)
{
	Network net = one_skip();
	ASSERT_TRUE(net.has_skip_edges());
	Lowering low = lower_skips_traced(net);
	EXPECT_FALSE(low.net.has_skip_edges());
	EXPECT_TRUE(low.net.valid());
	EXPECT_EQ(low.net.size(), net.size() + 1);
	ASSERT_EQ(low.added.size(), 1u);
	EXPECT_EQ(low.added[0].source, "h");
	Rng rng(11);
	for (int i = 0; i < 100; i++) {
		std::vector<double> x{testkit::uniform(rng, 0, 5)};
		EXPECT_EQ(eval(low.net, x), eval(net, x));
	}
}

TEST(Lower, NoSkipsUnchanged)
{
	Network net = testkit::fig1();
	Network low = lower_skips(net);
	EXPECT_EQ(low, net);
	EXPECT_EQ(low.size(), net.size());
}

TEST(Lower, SignedSourceCostsTwoPerLayer)
{
	using V = std::vector<Neuron>;
	for (std::size_t d = 1; d <= 4; d++) {
		// affine source in layer 1, consumed d + 1 layers later
		std::vector<std::vector<Neuron>> layers{V{{"x1", {}, 0, {}}}, V{{"s", std::nullopt, -1, {{"x1", 1}}}}};
		std::string prev = "s";
		for (std::size_t t = 0; t < d; t++) {
			std::string id = "c" + std::to_string(t);
			layers.push_back(V{{id, Activation::ReLU, 0, {{prev, 1}}}});
			prev = id;
		}
		layers.push_back(V{{"y", {}, 0, {{prev, 1}, {"s", 2}}}});
		Network net(layers);
		ASSERT_TRUE(net.valid());
		Network low = lower_skips(net);
		EXPECT_EQ(low.size(), net.size() + 2 * d);
		for (double x : {-3.0, -0.5, 0.0, 0.25, 4.0})
			EXPECT_EQ(eval(low, std::vector<double>{x}), eval(net, std::vector<double>{x}));
	}
}

TEST(Lower, SignedInputsNeedFlag)
{
	Network net = one_skip();
	// x1 read across layers only through h, so rewire to skip from the input
	auto layers = net.layers();
	layers[3][0].incoming.push_back({"x1", 1});
	Network skip(layers);
	LoweringOptions signed_inputs{{false}};
	Network low = lower_skips(skip, signed_inputs);
	for (double x : {-2.0, -0.1, 0.0, 1.5})
		EXPECT_EQ(eval(low, std::vector<double>{x}), eval(skip, std::vector<double>{x}));
}

TEST(Lower, RandomNetworksAgree)
{
	Rng rng(2024);
	for (int n = 0; n < 1000; n++) {
		testkit::NetShape s;
		s.inputs = static_cast<std::size_t>(testkit::uniform_int(rng, 1, 4));
		s.outputs = static_cast<std::size_t>(testkit::uniform_int(rng, 1, 3));
		s.max_hidden_layers = 4;
		s.skip_probability = 0.5;
		s.activations = {Activation::ReLU, Activation::Sigmoid, Activation::Tanh, Activation::NLReLU, Activation::Identity};
		Network net = testkit::random_network(rng, s);
		ASSERT_TRUE(net.valid());
		Network low = lower_skips(net);
		ASSERT_FALSE(low.has_skip_edges());
		auto x = testkit::sample_in(rng, InputBox::unit(s.inputs));
		auto a = eval(net, x), b = eval(low, x);
		for (std::size_t j = 0; j < a.size(); j++)
			EXPECT_NEAR(a[j], b[j], 1e-12);
	}
}

TEST(NetworkIo, RoundTrip)
{
	Network net = testkit::fig1();
	auto p = temp_file("fig1.json");
	write_network(net, p);
	EXPECT_EQ(read_network(p), net);

	auto layers = testkit::fig2a().layers();
	layers[1][0].bias = Rational(-7, 3);
	Network frac(layers, "frac", "notes here");
	write_network(frac, p);
	EXPECT_EQ(read_network(p), frac);
}

TEST(NetworkIo, UnknownActivationNamed)
{
	auto j = network_to_json(testkit::fig1());
	j["layers"][0][0]["activation"] = "swish";
	try {
		network_from_json(j);
		FAIL() << "accepted unknown activation";
	} catch (const ParseError &e) {
		EXPECT_NE(std::string(e.what()).find("swish"), std::string::npos);
	}
}

TEST(NetworkIo, BadRationalLiteral)
{
	auto j = network_to_json(testkit::fig1());
	j["layers"][0][0]["incoming"][0]["w"] = "0.1e";
	EXPECT_THROW(network_from_json(j), ParseError);
	j["layers"][0][0]["incoming"][0]["w"] = 0.1;
	EXPECT_THROW(network_from_json(j), ParseError);
	j["layers"][0][0]["incoming"][0]["w"] = 0.5;
	EXPECT_EQ(network_from_json(j).layer(1)[0].incoming[0].weight, Rational(1, 2));
	j["layers"][0][0]["incoming"][0]["w"] = "1/4";
	EXPECT_EQ(network_from_json(j).layer(1)[0].incoming[0].weight, Rational(1, 4));
}

TEST(NetworkIo, ParseErrorCarriesField)
{
	auto j = network_to_json(testkit::fig1());
	j["layers"][1][0]["bias"] = "x";
	try {
		network_from_json(j);
		FAIL();
	} catch (const ParseError &e) {
		EXPECT_NE(e.where().find("bias"), std::string::npos) << e.where();
	}
}

TEST(NetworkIo, MalformedJsonFile)
{
	auto p = temp_file("broken.json");
	std::ofstream(p) << "{\"input_dim\": 3, \"layers\": [";
	EXPECT_THROW(read_network(p), ParseError);
}

TEST(Rationals, Parse)
{
	EXPECT_EQ(parse_rational("3"), Rational(3));
	EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
	EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
	EXPECT_EQ(parse_rational("3e-2"), Rational(3, 100));
	// leading zeros are decimal
	EXPECT_EQ(parse_rational("0.75"), Rational(3, 4));
	EXPECT_EQ(parse_rational("0.9"), Rational(9, 10));
	EXPECT_EQ(parse_rational("010/08"), Rational(5, 4));
	EXPECT_THROW(parse_rational("0.1e"), ParseError);
	EXPECT_THROW(parse_rational("1/0"), ParseError);
	EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(Rationals, ExactDoubles)
{
	EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
	EXPECT_FALSE(rational_if_exact(0.1).has_value());
	EXPECT_EQ(*rational_if_exact(0.75), Rational(3, 4));
	EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
}
