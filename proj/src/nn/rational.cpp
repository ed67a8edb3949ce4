/* SPDX-License-Identifier: Apache-2.0 */

#include "reachc/rational.hpp"
#include "reachc/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace reachc {

namespace {

bool all_digits(std::string_view s)
{
	if (s.empty())
		return false;
	for (char c : s)
		if (!std::isdigit(static_cast<unsigned char>(c)))
			return false;
	return true;
}

mpz_class pow10(unsigned long e)
{
	mpz_class r;
	mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
	return r;
}

} // namespace

Rational parse_rational(std::string_view text)
{
	auto fail = [&](const char *why) -> Rational {
		throw ParseError({}, "invalid rational literal \"" + std::string(text) +
		                     "\": " + why);
	};
	std::string_view s = text;
	bool neg = false;
	if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
		neg = s.front() == '-';
		s.remove_prefix(1);
	}
	if (s.empty())
		return fail("empty");

	Rational r;
	if (auto slash = s.find('/'); slash != std::string_view::npos) {
		auto num = s.substr(0, slash), den = s.substr(slash + 1);
		if (!all_digits(num) || !all_digits(den))
			return fail("expected p/q with integer p and q");
		mpz_class d(std::string(den), 10);
		if (d == 0)
			return fail("zero denominator");
		r = Rational(mpz_class(std::string(num), 10), d);
		r.canonicalize();
	} else {
		std::string_view mant = s, exps;
		bool has_exp = false;
		if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
			mant = s.substr(0, e);
			exps = s.substr(e + 1);
			has_exp = true;
		}
		std::string_view ip = mant, fp;
		if (auto dot = mant.find('.'); dot != std::string_view::npos) {
			ip = mant.substr(0, dot);
			fp = mant.substr(dot + 1);
			if (ip.empty() && fp.empty())
				return fail("no digits");
			if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
				return fail("unexpected character");
		} else if (!all_digits(ip)) {
			return fail("unexpected character");
		}
		long exp10 = 0;
		if (has_exp) {
			bool eneg = false;
			if (!exps.empty() && (exps.front() == '-' || exps.front() == '+')) {
				eneg = exps.front() == '-';
				exps.remove_prefix(1);
			}
			if (!all_digits(exps))
				return fail("missing exponent digits");
			if (exps.size() > 6)
				return fail("exponent out of range");
			exp10 = std::stol(std::string(exps));
			if (eneg)
				exp10 = -exp10;
		}
		std::string digits = std::string(ip) + std::string(fp);
		exp10 -= static_cast<long>(fp.size());
		mpz_class n(digits, 10);
		if (exp10 >= 0)
			r = Rational(n * pow10(static_cast<unsigned long>(exp10)));
		else
			r = Rational(n, pow10(static_cast<unsigned long>(-exp10)));
		r.canonicalize();
	}
	if (neg)
		r = -r;
	return r;
}

std::string to_string(const Rational &q)
{
	return q.get_str();
}

double to_double(const Rational &q)
{
	// num/den is correctly rounded when both are exact doubles
	const mpz_class &n = q.get_num(), &d = q.get_den();
	if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 53)
		return n.get_d() / d.get_d();
	return q.get_d();
}

Rational exact_rational(double d)
{
	if (!std::isfinite(d))
		throw DomainError("non-finite value has no rational form");
	// mpq_set_d is exact for finite doubles
	return Rational(d);
}

std::optional<Rational> rational_if_exact(double d)
{
	if (!std::isfinite(d))
		return std::nullopt;
	char buf[64];
	auto res = std::to_chars(buf, buf + sizeof buf, d);
	Rational stated = parse_rational(std::string_view(buf, res.ptr - buf));
	if (stated != exact_rational(d))
		return std::nullopt;
	return stated;
}

} // namespace reachc
