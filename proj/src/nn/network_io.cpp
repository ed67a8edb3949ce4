/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/network_io.hpp"
#include "reachc/error.hpp"

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace reachc {

Rational rational_from_json(const json &j, const std::string &where)
{
	try {
		if (j.is_string())
			return parse_rational(j.get<std::string>());
		if (j.is_number_integer())
			return Rational(mpz_class(j.dump()));
		if (j.is_number_float()) {
			if (auto q = rational_if_exact(j.get<double>()))
				return *q;
			throw ParseError(where, "float literal " + j.dump() +
			                            " is not exactly representable; write it as a string");
		}
	} catch (const ParseError &e) {
		if (!e.where().empty())
			throw;
		throw ParseError(where, e.what());
	}
	throw ParseError(where, "expected a rational, got " + std::string(j.type_name()));
}

namespace {

const json &member(const json &obj, const char *key, const std::string &where)
{
	if (!obj.is_object())
		throw ParseError(where, "expected an object");
	auto it = obj.find(key);
	if (it == obj.end())
		throw ParseError(where, std::string("missing field \"") + key + "\"");
	return *it;
}

std::string str(const json &j, const std::string &where)
{
	if (!j.is_string())
		throw ParseError(where, "expected a string");
	return j.get<std::string>();
}

} // namespace

json network_to_json(const Network &net)
{
	json j;
	if (!net.name().empty())
		j["name"] = net.name();
	if (!net.notes().empty())
		j["notes"] = net.notes();
	j["input_dim"] = net.input_dim();
	json inputs = json::array();
	for (const auto &n : net.layer(0))
		inputs.push_back(n.id);
	j["inputs"] = inputs;
	json layers = json::array();
	for (std::size_t l = 1; l < net.depth(); l++) {
		json layer = json::array();
		for (const auto &n : net.layer(l)) {
			json jn;
			jn["id"] = n.id;
			jn["activation"] = n.activation ? json(std::string(to_string(*n.activation))) : json(nullptr);
			jn["bias"] = to_string(n.bias);
			json in = json::array();
			for (const auto &e : n.incoming)
				in.push_back({{"src", e.src}, {"w", to_string(e.weight)}});
			jn["incoming"] = in;
			layer.push_back(jn);
		}
		layers.push_back(layer);
	}
	j["layers"] = layers;
	return j;
}

Network network_from_json(const json &j)
{
	const json &dim = member(j, "input_dim", "network");
	if (!dim.is_number_integer() || dim.get<long long>() <= 0)
		throw ParseError("input_dim", "expected a positive integer");
	std::size_t m = dim.get<std::size_t>();

	std::vector<std::vector<Neuron>> layers(1);
	if (auto it = j.find("inputs"); it != j.end()) {
		if (!it->is_array() || it->size() != m)
			throw ParseError("inputs", "expected an array of " + std::to_string(m) + " ids");
		for (std::size_t i = 0; i < m; i++)
			layers[0].push_back(Neuron{str((*it)[i], "inputs[" + std::to_string(i) + "]"), {}, 0, {}});
	} else {
		for (std::size_t i = 0; i < m; i++)
			layers[0].push_back(Neuron{"x" + std::to_string(i + 1), {}, 0, {}});
	}

	const json &jl = member(j, "layers", "network");
	if (!jl.is_array())
		throw ParseError("layers", "expected an array of layers");
	for (std::size_t l = 0; l < jl.size(); l++) {
		std::string lw = "layers[" + std::to_string(l) + "]";
		if (!jl[l].is_array())
			throw ParseError(lw, "expected an array of neurons");
		std::vector<Neuron> layer;
		for (std::size_t k = 0; k < jl[l].size(); k++) {
			const json &jn = jl[l][k];
			std::string w = lw + "[" + std::to_string(k) + "]";
			if (!jn.is_object())
				throw ParseError(w, "expected a neuron object");
			Neuron n;
			if (auto it = jn.find("id"); it != jn.end())
				n.id = str(*it, w + ".id");
			else
				n.id = "n" + std::to_string(l + 1) + "_" + std::to_string(k + 1);
			const json &ja = member(jn, "activation", w);
			if (!ja.is_null()) {
				std::string a = str(ja, w + ".activation");
				n.activation = activation_from_string(a);
				if (!n.activation)
					throw ParseError(w + ".activation", "unknown activation \"" + a + "\"");
			}
			n.bias = rational_from_json(member(jn, "bias", w), w + ".bias");
			const json &in = member(jn, "incoming", w);
			if (!in.is_array())
				throw ParseError(w + ".incoming", "expected an array of edges");
			for (std::size_t e = 0; e < in.size(); e++) {
				std::string ew = w + ".incoming[" + std::to_string(e) + "]";
				n.incoming.push_back({str(member(in[e], "src", ew), ew + ".src"),
				                      rational_from_json(member(in[e], "w", ew), ew + ".w")});
			}
			layer.push_back(std::move(n));
		}
		layers.push_back(std::move(layer));
	}

	std::string name, notes;
	if (auto it = j.find("name"); it != j.end())
		name = str(*it, "name");
	if (auto it = j.find("notes"); it != j.end())
		notes = str(*it, "notes");
	return Network(std::move(layers), std::move(name), std::move(notes));
}

json read_json_file(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError(path.string(), "cannot open file");
	try {
		return json::parse(in);
	} catch (const json::parse_error &e) {
		throw ParseError(path.string(), e.what());
	}
}

std::string read_text_file(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ParseError(path.string(), "cannot open file");
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text)
{
	std::ofstream out(path);
	if (!out)
		throw Error("cannot write " + path.string());
	out << text;
}

Network read_network(const std::filesystem::path &path)
{
	json j = read_json_file(path);
	try {
		return network_from_json(j);
	} catch (const ParseError &e) {
		throw ParseError(path.string(), e.what());
	}
}

void write_network(const Network &net, const std::filesystem::path &path)
{
	write_text_file(path, network_to_json(net).dump(1, '\t') + "\n");
}

json box_to_json(const InputBox &box)
{
	json b = json::array();
	for (const auto &[lo, hi] : box.bounds)
		b.push_back({to_string(lo), to_string(hi)});
	return {{"box", b}};
}

InputBox box_from_json(const json &j)
{
	const json &b = member(j, "box", "box file");
	if (!b.is_array())
		throw ParseError("box", "expected an array of [lo, hi] pairs");
	InputBox box;
	for (std::size_t i = 0; i < b.size(); i++) {
		std::string w = "box[" + std::to_string(i) + "]";
		if (!b[i].is_array() || b[i].size() != 2)
			throw ParseError(w, "expected [lo, hi]");
		Rational lo = rational_from_json(b[i][0], w + "[0]");
		Rational hi = rational_from_json(b[i][1], w + "[1]");
		if (lo > hi)
			throw ValidationError(w + ": lower bound exceeds upper bound");
		box.bounds.emplace_back(lo, hi);
	}
	return box;
}

InputBox read_box(const std::filesystem::path &path)
{
	return box_from_json(read_json_file(path));
}

} // namespace reachc
