/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/bridge.hpp"
#include "reachc/compile.hpp"
#include "reachc/error.hpp"
#include "reachc/network_io.hpp"
#include "reachc/reach.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

using namespace reachc;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, unreachable = 1, parse_error = 2, invalid = 3, unknown = 4, failure = 5 };

struct Config {
	double eps_min = 1e-6;
	double eps_tol = 1e-3;
	long long budget = 100000;
	std::uint64_t seed = 0;
	bool deterministic = false;
	std::string smt_header = "native-exp";

	std::string net, net2, spec, phi, box, out, compiled, trace, in;
};

Network load_network(const std::string &path)
{
	Network n = read_network(path);
	if (!n.valid()) {
		std::string msg;
		for (const auto &e : n.errors())
			msg += "\n  " + e.code + ": " + e.message;
		throw ValidationError(path + ": invalid network:" + msg);
	}
	return n;
}

Formula load_formula(const Config &c, std::size_t k)
{
	if (!c.phi.empty())
		return parse_formula(c.phi, k);
	std::string text = read_text_file(c.spec);
	try {
		return parse_formula(text, k);
	} catch (const ParseError &e) {
		throw ParseError(c.spec + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
	}
}

InputBox load_box(const Config &c, std::size_t m)
{
	InputBox b = c.box.empty() ? InputBox::unit(m) : read_box(c.box);
	if (b.dim() != m)
		throw ValidationError("box has " + std::to_string(b.dim()) + " intervals, network has " +
		                      std::to_string(m) + " inputs");
	return b;
}

fs::path sidecar_for(const fs::path &out)
{
	fs::path p = out;
	return p.replace_extension(".trace.json");
}

ReachOptions reach_options(const Config &c)
{
	ReachOptions o;
	o.eps_tol = c.eps_tol;
	o.budget = c.budget;
	o.seed = c.seed;
	o.deterministic = c.deterministic;
	return o;
}

int report(const Verdict &v)
{
	std::cout << verdict_to_json(v).dump() << "\n";
	switch (v.kind) {
	case Verdict::Kind::Reachable: return ok;
	case Verdict::Kind::Unreachable: return unreachable;
	case Verdict::Kind::Unknown: return unknown;
	}
	return failure;
}

int cmd_compile(const Config &c)
{
	Network net = load_network(c.net);
	Formula f = load_formula(c, net.output_dim());
	InputBox box = load_box(c, net.input_dim());
	CompiledQuery cq = compile(net, f, box, c.eps_min);
	write_network(cq.net_prime, c.out);
	write_text_file(sidecar_for(c.out), trace_to_json(cq).dump(1, '\t') + "\n");
	std::cout << size_to_json(size_report(cq)).dump() << "\n";
	return ok;
}

int cmd_check(const Config &c)
{
	ReachOptions opts = reach_options(c);
	if (!c.compiled.empty()) {
		Network np = load_network(c.compiled);
		fs::path side = c.trace.empty() ? sidecar_for(c.compiled) : fs::path(c.trace);
		nlohmann::json t = read_json_file(side);
		InputBox box = box_from_json(nlohmann::json{{"box", t.at("box")}});
		double lo = t.at("eps_range").at(0).get<double>(), hi = t.at("eps_range").at(1).get<double>();
		box.bounds.emplace_back(exact_rational(lo), exact_rational(hi));
		std::size_t ei = t.at("epsilon_index").get<std::size_t>();
		if (ei + 1 != box.dim())
			throw ValidationError("sidecar epsilon index must be the last input");
		if (box.dim() != np.input_dim())
			throw ValidationError("sidecar box does not match the compiled network");
		return report(decide_reach(np, box, opts));
	}
	Network net = load_network(c.net);
	InputBox box = load_box(c, net.input_dim());
	if (c.spec.empty() && c.phi.empty()) {
		if (net.output_dim() != 1)
			throw ValidationError("check without a spec needs a scalar-output network");
		return report(decide_reach(net, box, opts));
	}
	Formula f = load_formula(c, net.output_dim());
	CompiledQuery cq = compile(net, f, box, c.eps_min);
	return report(decide_reach(cq.net_prime, cq.extended_box(), opts));
}

int cmd_emit_smt(const Config &c)
{
	Network net = load_network(c.net);
	Formula f = load_formula(c, net.output_dim());
	InputBox box = load_box(c, net.input_dim());
	SmtHeader h = c.smt_header == "axiomatized" ? SmtHeader::Axiomatized : SmtHeader::NativeExp;
	std::string script = to_exp_smt(net, f, box, h);
	if (c.out.empty())
		std::cout << script;
	else
		write_text_file(c.out, script);
	return ok;
}

int cmd_purify(const Config &c)
{
	BFormula f = parse_bridge(read_text_file(c.in));
	Definition d = purify_e_to_sigma(f);
	std::string text = to_sexpr(d.formula) + "\n";
	if (c.out.empty())
		std::cout << text;
	else
		write_text_file(c.out, text);
	return ok;
}

int cmd_equiv(const Config &c)
{
	Network n = equiv_reduce(load_network(c.net), load_network(c.net2));
	write_network(n, c.out);
	std::cout << nlohmann::json{{"neurons", n.size()}, {"depth", n.depth()}}.dump() << "\n";
	return ok;
}

} // namespace

int main(int argc, char **argv)
{
	Config c;
	CLI::App app{"Compile network verification queries into reachability queries and decide them"};
	app.require_subcommand(1);
	app.fallthrough();

	app.add_option("--eps-min", c.eps_min, "Smallest epsilon considered")->check(CLI::Range(1e-300, 1.0));
	app.add_option("--eps-tol", c.eps_tol, "Reachability tolerance")->check(CLI::PositiveNumber);
	app.add_option("--budget", c.budget, "Evaluation budget for the search")->check(CLI::PositiveNumber);
	app.add_option("--seed", c.seed, "Random seed");
	app.add_flag("--deterministic", c.deterministic, "Single-threaded, reproducible search");
	app.add_option("--smt-header", c.smt_header, "Treatment of exp in SMT output")
		->check(CLI::IsMember({"native-exp", "axiomatized"}));

	auto spec_opts = [&](CLI::App *s) {
		auto spec = s->add_option("--spec", c.spec, "File with the output property");
		auto phi = s->add_option("--phi", c.phi, "Output property given inline");
		spec->excludes(phi);
		s->add_option("--box", c.box, "Input box JSON (default [0,1]^m)");
		return std::pair{spec, phi};
	};

	auto *compile_cmd = app.add_subcommand("compile", "Build the reachability network N'");
	compile_cmd->add_option("--net", c.net, "Network JSON")->required();
	auto [cs, cp] = spec_opts(compile_cmd);
	compile_cmd->add_option("--out", c.out, "Output network JSON")->required();

	auto *check_cmd = app.add_subcommand("check", "Decide reachability of a compiled or fresh query");
	auto cc = check_cmd->add_option("--compiled", c.compiled, "Compiled network JSON");
	check_cmd->add_option("--trace", c.trace, "Sidecar of the compiled network");
	auto cn = check_cmd->add_option("--net", c.net, "Network JSON");
	spec_opts(check_cmd);
	cc->excludes(cn);

	auto *smt_cmd = app.add_subcommand("emit-smt", "Write the query as an SMT-LIB script over exp");
	smt_cmd->add_option("--net", c.net, "Network JSON")->required();
	spec_opts(smt_cmd);
	smt_cmd->add_option("--out", c.out, "Output file (default stdout)");

	auto *purify_cmd = app.add_subcommand("purify", "Rewrite an e-signature formula into the sigma signature");
	purify_cmd->add_option("--in", c.in, "Formula as an s-expression")->required();
	purify_cmd->add_option("--out", c.out, "Output file (default stdout)");

	auto *equiv_cmd = app.add_subcommand("equiv", "Reduce equivalence of two networks to reachability");
	equiv_cmd->add_option("--net1", c.net, "First network")->required();
	equiv_cmd->add_option("--net2", c.net2, "Second network")->required();
	equiv_cmd->add_option("--out", c.out, "Output network JSON")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		app.exit(e);
		return parse_error;
	}

	try {
		if (*compile_cmd) {
			if (cs->count() + cp->count() == 0)
				throw CLI::RequiredError("--spec or --phi");
			return cmd_compile(c);
		}
		if (*check_cmd) {
			if (c.compiled.empty() && c.net.empty())
				throw CLI::RequiredError("--compiled or --net");
			return cmd_check(c);
		}
		if (*smt_cmd) {
			if (c.spec.empty() && c.phi.empty())
				throw CLI::RequiredError("--spec or --phi");
			return cmd_emit_smt(c);
		}
		if (*purify_cmd)
			return cmd_purify(c);
		if (*equiv_cmd)
			return cmd_equiv(c);
	} catch (const CLI::Error &e) {
		std::cerr << "reachc: " << e.what() << "\n";
		return parse_error;
	} catch (const ParseError &e) {
		std::cerr << "reachc: parse error: " << e.what() << "\n";
		return parse_error;
	} catch (const nlohmann::json::exception &e) {
		std::cerr << "reachc: parse error: " << e.what() << "\n";
		return parse_error;
	} catch (const ValidationError &e) {
		std::cerr << "reachc: invalid input: " << e.what() << "\n";
		return invalid;
	} catch (const DomainError &e) {
		std::cerr << "reachc: invalid input: " << e.what() << "\n";
		return invalid;
	} catch (const std::exception &e) {
		std::cerr << "reachc: " << e.what() << "\n";
		return failure;
	}
	return failure;
}
