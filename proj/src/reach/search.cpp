/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/error.hpp"
#include "reachc/reach.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <thread>

namespace reachc {

std::string_view to_string(Verdict::Kind k)
{
	switch (k) {
	case Verdict::Kind::Reachable: return "reachable";
	case Verdict::Kind::Unreachable: return "unreachable";
	case Verdict::Kind::Unknown: return "unknown";
	}
	return "?";
}

namespace {

constexpr double fd_step = 1e-4;
constexpr std::size_t max_starts = 16;

unsigned prime(std::size_t i)
{
	static const unsigned small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
	if (i < std::size(small))
		return small[i];
	unsigned p = small[std::size(small) - 1];
	for (std::size_t found = std::size(small) - 1; found < i;) {
		p += 2;
		bool ok = true;
		for (unsigned q = 3; q * q <= p; q += 2)
			if (p % q == 0) {
				ok = false;
				break;
			}
		if (ok)
			found++;
	}
	return p;
}

double radical_inverse(std::uint64_t n, unsigned base)
{
	double inv = 1.0 / base, f = inv, r = 0;
	while (n > 0) {
		r += static_cast<double>(n % base) * f;
		n /= base;
		f *= inv;
	}
	return r;
}

// Objective on the unit cube u in [0,1]^m mapped affinely onto the box.
class Objective {
public:
	Objective(const Network &net, const InputBox &box) : ev_(net)
	{
		for (const auto &[lo, hi] : box.bounds) {
			lo_.push_back(to_double(lo));
			hi_.push_back(to_double(hi));
		}
		x_.resize(lo_.size());
	}

	std::size_t dim() const { return lo_.size(); }
	bool degenerate(std::size_t i) const { return lo_[i] == hi_[i]; }

	std::vector<double> point(std::span<const double> u) const
	{
		std::vector<double> x(u.size());
		for (std::size_t i = 0; i < u.size(); i++)
			x[i] = std::clamp(lo_[i] + (hi_[i] - lo_[i]) * u[i], lo_[i], hi_[i]);
		return x;
	}

	double operator()(std::span<const double> u)
	{
		evals++;
		for (std::size_t i = 0; i < u.size(); i++)
			x_[i] = std::clamp(lo_[i] + (hi_[i] - lo_[i]) * u[i], lo_[i], hi_[i]);
		return ev_.scalar(x_);
	}

	long long evals = 0;

private:
	Evaluator ev_;
	std::vector<double> lo_, hi_, x_;
};

struct Start {
	std::vector<double> u;
	double value;
};

struct AscentResult {
	std::vector<double> u;
	double value;
	long long evals = 0;
	bool reached = false;
};

AscentResult ascend(const Network &net, const InputBox &box, Start s, long long budget,
                    double target, std::uint64_t seed, const std::atomic<std::size_t> &winner,
                    std::size_t index)
{
	Objective f(net, box);
	std::mt19937_64 rng(seed);
	std::size_t m = f.dim();
	AscentResult r{s.u, s.value};
	double alpha = 0.25;
	std::vector<double> g(m), trial(m), probe(m);

	auto spent = [&] { return f.evals >= budget || winner.load(std::memory_order_relaxed) < index; };

	while (!spent() && r.value < target) {
		// central differences, one-sided at the faces
		probe = r.u;
		double gnorm = 0;
		for (std::size_t i = 0; i < m && !spent(); i++) {
			g[i] = 0;
			if (f.degenerate(i))
				continue;
			double a = std::max(0.0, r.u[i] - fd_step), b = std::min(1.0, r.u[i] + fd_step);
			probe[i] = a;
			double fa = f(probe);
			probe[i] = b;
			double fb = f(probe);
			probe[i] = r.u[i];
			g[i] = (fb - fa) / (b - a);
			gnorm = std::max(gnorm, std::fabs(g[i]));
		}
		if (spent())
			break;

		bool moved = false;
		if (gnorm > 0) {
			for (double t = alpha; t > 1e-9 && !spent(); t *= 0.5) {
				for (std::size_t i = 0; i < m; i++)
					trial[i] = std::clamp(r.u[i] + t * g[i] / gnorm, 0.0, 1.0);
				double v = f(trial);
				if (v > r.value) {
					r.u = trial;
					r.value = v;
					alpha = std::min(1.0, 2 * t);
					moved = true;
					break;
				}
			}
		}
		if (!moved) {
			// flat or stuck: random perturbation around the current point
			std::uniform_real_distribution<double> step(-alpha, alpha);
			for (std::size_t i = 0; i < m; i++)
				trial[i] = f.degenerate(i) ? r.u[i] : std::clamp(r.u[i] + step(rng), 0.0, 1.0);
			if (spent())
				break;
			double v = f(trial);
			if (v > r.value) {
				r.u = trial;
				r.value = v;
			} else {
				alpha = std::max(1e-3, alpha * 0.5);
			}
		}
	}
	r.evals = f.evals;
	r.reached = r.value >= target;
	return r;
}

unsigned worker_count(const ReachOptions &opts)
{
	if (opts.deterministic)
		return 1;
	unsigned n = opts.threads;
	if (n == 0) {
		n = std::max(1u, std::thread::hardware_concurrency());
		if (const char *cap = std::getenv("REACHC_THREADS")) {
			long c = std::strtol(cap, nullptr, 10);
			if (c > 0)
				n = std::min<unsigned>(n, static_cast<unsigned>(c));
		}
	}
	return std::max(1u, n);
}

} // namespace

Verdict decide_reach(const Network &net, const InputBox &box, const ReachOptions &opts)
{
	if (opts.budget <= 0)
		throw DomainError("budget must be positive");
	if (!(opts.eps_tol > 0))
		throw DomainError("eps_tol must be positive");
	if (!net.valid())
		throw ValidationError("invalid network: " + net.errors().front().message);
	if (net.output_dim() != 1)
		throw DomainError("reachability needs a scalar-output network, got " +
		                  std::to_string(net.output_dim()) + " outputs");
	if (box.dim() != net.input_dim())
		throw DomainError("box has " + std::to_string(box.dim()) + " intervals, network has " +
		                  std::to_string(net.input_dim()) + " inputs");
	for (const auto &[lo, hi] : box.bounds)
		if (lo > hi)
			throw DomainError("box interval with lo > hi");

	Verdict v;
	v.upper_bound = interval_bounds(net, box)[0].hi;
	if (v.upper_bound < 0) {
		v.kind = Verdict::Kind::Unreachable;
		return v;
	}

	const double target = -opts.eps_tol;
	std::size_t m = net.input_dim();
	Objective f(net, box);

	auto finish_reachable = [&](std::span<const double> u, long long evals) {
		v.kind = Verdict::Kind::Reachable;
		v.witness = f.point(u);
		v.value = eval(net, v.witness)[0];
		v.evals = evals;
		if (!(v.value >= target))
			throw Error("internal: witness failed re-verification");
		return v;
	};

	// low-discrepancy sampling with a seeded random shift
	std::mt19937_64 rng(opts.seed);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	std::vector<double> shift(m);
	for (auto &s : shift)
		s = unit(rng);

	long long sample_budget = std::max<long long>(1, opts.budget / 2);
	std::vector<Start> samples;
	std::vector<double> u(m);
	for (long long i = 0; i < sample_budget; i++) {
		for (std::size_t d = 0; d < m; d++) {
			double h = radical_inverse(static_cast<std::uint64_t>(i) + 1, prime(d)) + shift[d];
			u[d] = h - std::floor(h);
		}
		double val = f(u);
		if (val >= target)
			return finish_reachable(u, f.evals);
		samples.push_back({u, val});
	}

	long long left = opts.budget - f.evals;
	std::size_t nstarts = std::min<std::size_t>(max_starts, samples.size());
	if (left > 0 && nstarts > 0) {
		std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(nstarts),
		                  samples.end(), [](const Start &a, const Start &b) { return a.value > b.value; });
		nstarts = std::min<std::size_t>(nstarts, static_cast<std::size_t>(left));
		std::vector<long long> share(nstarts, left / static_cast<long long>(nstarts));
		for (std::size_t i = 0; i < static_cast<std::size_t>(left % static_cast<long long>(nstarts)); i++)
			share[i]++;
		std::vector<std::uint64_t> seeds(nstarts);
		for (auto &s : seeds)
			s = rng();

		std::vector<AscentResult> results(nstarts);
		std::atomic<std::size_t> winner{nstarts};
		std::atomic<std::size_t> next{0};
		auto work = [&] {
			for (std::size_t i; (i = next.fetch_add(1)) < nstarts;) {
				results[i] = ascend(net, box, samples[i], share[i], target, seeds[i], winner, i);
				if (results[i].reached) {
					std::size_t w = winner.load();
					while (i < w && !winner.compare_exchange_weak(w, i)) {
					}
				}
			}
		};
		unsigned nthreads = std::min<unsigned>(worker_count(opts), static_cast<unsigned>(nstarts));
		if (nthreads <= 1) {
			work();
		} else {
			std::vector<std::thread> pool;
			for (unsigned t = 0; t < nthreads; t++)
				pool.emplace_back(work);
			for (auto &t : pool)
				t.join();
		}

		long long total = f.evals;
		for (const auto &r : results)
			total += r.evals;
		std::size_t w = winner.load();
		if (w < nstarts)
			return finish_reachable(results[w].u, total);

		const AscentResult *best = &results[0];
		for (const auto &r : results)
			if (r.value > best->value)
				best = &r;
		v.kind = Verdict::Kind::Unknown;
		v.witness = f.point(best->u);
		v.value = best->value;
		v.evals = total;
		return v;
	}

	auto best = std::max_element(samples.begin(), samples.end(),
	                             [](const Start &a, const Start &b) { return a.value < b.value; });
	v.kind = Verdict::Kind::Unknown;
	v.witness = f.point(best->u);
	v.value = best->value;
	v.evals = f.evals;
	return v;
}

nlohmann::json verdict_to_json(const Verdict &v)
{
	nlohmann::json j = {{"v", 1}, {"verdict", to_string(v.kind)}};
	if (v.kind != Verdict::Kind::Unreachable) {
		j["witness"] = v.witness;
		j["value"] = v.value;
	}
	j["upper_bound"] = v.upper_bound;
	j["evals"] = v.evals;
	return j;
}

} // namespace reachc
