#include "orbmod/hypothesis.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace orbmod {

namespace {

BinaryFormZ combine(long a, const BinaryFormZ& f, long b, const BinaryFormZ& g)
{
	std::vector<Integer> c(f.coefficients().size());
	for (std::size_t i = 0; i < c.size(); ++i) c[i] = a * f[i] + b * g[i];
	return BinaryFormZ(std::move(c));
}

const std::vector<Mobius>& mobius_schedule()
{
	static const std::vector<Mobius> schedule = [] {
		std::vector<Mobius> out{Mobius{}};
		std::mt19937_64 rng(0x6d6f6269757331ull);
		std::uniform_int_distribution<long> entry(-7, 7);
		while (out.size() < kMobiusTries + 1) {
			Mobius m{entry(rng), entry(rng), entry(rng), entry(rng)};
			if (m.a * m.e - m.b * m.c != 0) out.push_back(m);
		}
		return out;
	}();
	return schedule;
}

// D(w) for M o f.
BigRationalPoly chart_poly(const RationalMapQ& f, const Mobius& m)
{
	if (m.is_identity()) return critical_value_poly(f.numerator(), f.denominator());
	return critical_value_poly(combine(m.a, f.numerator(), m.b, f.denominator()),
	                           combine(m.c, f.numerator(), m.e, f.denominator()));
}

[[noreturn]] void no_chart()
{
	throw std::logic_error("no coordinate change made infinity non-critical; this indicates a bug");
}

Rational depress_shift(const BigRationalPoly& p)
{
	const int n = p.degree();
	return p.coeff(n - 1) / (Rational(n) * p.leading());
}

std::optional<Rational> rational_root(const Rational& q, unsigned k)
{
	if (q < 0 && k % 2 == 0) return std::nullopt;
	Integer num = abs(q.get_num()), den = q.get_den();
	Integer rn, rd;
	if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) || !mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k))
		return std::nullopt;
	Rational r(rn, rd);
	r.canonicalize();
	return q < 0 ? Rational(-r) : r;
}

RationalMapQ draw_map(int degree, int height, std::mt19937_64& rng)
{
	std::uniform_int_distribution<long> coeff(-height, height);
	for (;;) {
		std::vector<Integer> num(static_cast<std::size_t>(degree) + 1), den(num.size());
		for (auto& c : num) c = coeff(rng);
		for (auto& c : den) c = coeff(rng);
		try {
			return RationalMapQ(BinaryFormZ(std::move(num)), BinaryFormZ(std::move(den)));
		} catch (const ContractError&) {
			// degenerate draw, resample
		}
	}
}

} // namespace

BigRationalPoly critical_value_poly(const BinaryFormZ& num, const BinaryFormZ& den)
{
	const int d = num.degree();
	if (d < 2 || den.degree() != d) throw ContractError("critical_value_poly: forms must share a degree >= 2");
	std::vector<Rational> ws, vs;
	for (int w = 0; w <= 2 * d - 2; ++w) {
		const BinaryFormZ h = combine(1, num, -w, den);
		const BinaryFormZ hx = h.partial_x(), hz = h.partial_z();
		ws.emplace_back(w);
		vs.emplace_back(sylvester_resultant(hx.coefficients(), hz.coefficients()));
	}
	return interpolate(ws, vs);
}

int CriticalData::total_multiplicity() const
{
	int t = infinity_multiplicity;
	for (const auto& [p, e] : profile) t += p.degree() * e;
	return t;
}

CriticalData critical_values(const RationalMapQ& f)
{
	CriticalData out;
	out.degree = f.degree();
	out.values = critical_value_poly(f.numerator(), f.denominator());
	out.profile = squarefree_decomposition(out.values);
	out.infinity_multiplicity = 2 * out.degree - 2 - out.values.degree();
	for (const auto& m : mobius_schedule()) {
		BigRationalPoly d = chart_poly(f, m);
		if (d.degree() == 2 * out.degree - 2) {
			out.chart = m;
			out.chart_values = std::move(d);
			return out;
		}
	}
	no_chart();
}

bool is_critically_simple(const RationalMapQ& f)
{
	for (const auto& m : mobius_schedule()) {
		const BigRationalPoly d = chart_poly(f, m);
		if (d.degree() == 2 * f.degree() - 2) return is_squarefree(d);
	}
	no_chart();
}

bool are_critically_separated(const RationalMapQ& f, const RationalMapQ& g)
{
	for (const auto& m : mobius_schedule()) {
		const BigRationalPoly df = chart_poly(f, m);
		if (df.degree() != 2 * f.degree() - 2) continue;
		const BigRationalPoly dg = chart_poly(g, m);
		if (dg.degree() != 2 * g.degree() - 2) continue;
		return resultant(df, dg) != 0;
	}
	no_chart();
}

BigRationalPoly chebyshev(int n)
{
	if (n < 0) throw ContractError("chebyshev: n must be >= 0");
	BigRationalPoly prev{1}, cur = BigRationalPoly::x();
	if (n == 0) return prev;
	const BigRationalPoly two_x = BigRationalPoly::monomial(2, 1);
	for (int k = 1; k < n; ++k) {
		BigRationalPoly next = two_x * cur - prev;
		prev = std::move(cur);
		cur = std::move(next);
	}
	return cur;
}

BigRationalPoly scaled_chebyshev(int n, const Rational& lambda_sq)
{
	if (lambda_sq == 0) throw ContractError("scaled_chebyshev: lambda must be nonzero");
	const BigRationalPoly t = chebyshev(n);
	std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
	for (int k = n % 2; k <= n; k += 2) {
		Rational scale = 1;
		for (int i = 0; i < (n - k) / 2; ++i) scale /= lambda_sq;
		c[static_cast<std::size_t>(k)] = t.coeff(k) * scale;
	}
	return BigRationalPoly(std::move(c));
}

std::optional<RightDecomposition> right_decompose(const BigRationalPoly& f, int n)
{
	const int d = f.degree();
	if (f.is_zero() || n < 1 || d % n != 0) throw ContractError("right_decompose: n must divide deg f");
	const int m = d / n;
	const BigRationalPoly target = f.monic();
	std::vector<Rational> hc(static_cast<std::size_t>(n) + 1);
	hc[static_cast<std::size_t>(n)] = 1;
	// the x^{d-j} coefficient of h^m is m h_{n-j} plus terms in h_{n-1}, ..., h_{n-j+1}
	for (int j = 1; j < n; ++j) {
		const BigRationalPoly hm = BigRationalPoly(hc).pow(static_cast<unsigned>(m));
		hc[static_cast<std::size_t>(n - j)] += (target.coeff(d - j) - hm.coeff(d - j)) / m;
	}
	const BigRationalPoly h(hc);

	std::vector<Rational> digits;
	BigRationalPoly rest = f;
	while (!rest.is_zero()) {
		PolyDivision qr = divide(rest, h);
		if (qr.remainder.degree() > 0) return std::nullopt;
		digits.push_back(qr.remainder.coeff(0));
		rest = std::move(qr.quotient);
	}
	BigRationalPoly outer(std::move(digits));
	if (outer.degree() != m || !(outer.compose(h) == f)) return std::nullopt;
	return RightDecomposition{std::move(outer), h};
}

BigRationalPoly PowerLikeWitness::inner() const
{
	const BigRationalPoly lin{std::vector<Rational>{shift, Rational(1)}};
	if (kind == InnerKind::power) return lin.pow(static_cast<unsigned>(n));
	return scaled_chebyshev(n, lambda_sq).compose(lin);
}

BigRationalPoly PowerLikeWitness::recompose() const { return outer.compose(inner()); }

std::string PowerLikeWitness::to_string() const
{
	std::ostringstream os;
	os << "R(y) = " << outer.to_string("y") << "; C = " << (kind == InnerKind::power ? "x^" : "T_") << n
	   << "; L = lambda*(x + " << shift.get_str() << ") with lambda^2 = " << lambda_sq.get_str();
	return os.str();
}

PowerLikeVerdict is_power_like(const BigRationalPoly& f)
{
	const int d = f.degree();
	if (f.is_zero() || d < 2) throw ContractError("is_power_like: degree must be >= 2");
	PowerLikeVerdict out;
	for (int n = 2; n <= d; ++n) {
		if (d % n != 0) continue;
		const auto rd = right_decompose(f, n);
		if (!rd) continue;
		const BigRationalPoly& h = rd->inner;
		const Rational s = h.coeff(n - 1) / n;
		const BigRationalPoly lin{std::vector<Rational>{s, Rational(1)}};

		// power kind: h' = n (x + s)^{n-1}, so h = (x + s)^n + h(-s)
		if (h.derivative() == lin.pow(static_cast<unsigned>(n - 1)) * Rational(n)) {
			const BigRationalPoly up{std::vector<Rational>{h(-s), Rational(1)}};
			PowerLikeWitness w{rd->outer.compose(up), InnerKind::power, n, Rational(1), s};
			if (w.recompose() == f) {
				out.is_power_like = true;
				out.witness = std::move(w);
				return out;
			}
		}

		if (n < 3) continue;
		// Chebyshev kind: the depressed factor must be 2^{1-n} lambda^-n T_n(lambda x) + b
		const BigRationalPoly depressed = h.compose(BigRationalPoly{std::vector<Rational>{-s, Rational(1)}});
		const Rational sub = depressed.coeff(n - 2);
		if (sub == 0) continue;
		const Rational lambda_sq = Rational(-n) / (4 * sub);
		Rational two_pow = 1;
		for (int i = 1; i < n; ++i) two_pow *= 2;
		const BigRationalPoly c = scaled_chebyshev(n, lambda_sq) * Rational(1 / two_pow);
		const Rational b = depressed.coeff(0) - c.coeff(0);
		if (!(depressed == c + BigRationalPoly::constant(b))) continue;
		const BigRationalPoly up{std::vector<Rational>{b, Rational(1 / two_pow)}};
		PowerLikeWitness w{rd->outer.compose(up), InnerKind::chebyshev, n, lambda_sq, s};
		if (w.recompose() == f) {
			out.is_power_like = true;
			out.witness = std::move(w);
			return out;
		}
	}
	return out;
}

BigRationalPoly LeftFactor::g_for(const Rational& alpha) const
{
	return (h + BigRationalPoly::constant(u)) * alpha - BigRationalPoly::constant(v);
}

std::optional<LeftFactor> left_compositional_factor(const BigRationalPoly& f1, const BigRationalPoly& f2)
{
	if (f1.is_zero() || f2.is_zero() || f1.degree() < 2 || f2.degree() < 2)
		throw ContractError("left_compositional_factor: degrees must be >= 2");
	const int n = f2.degree();
	if (f1.degree() % n != 0 || f1.degree() / n < 2) return std::nullopt;
	const auto rd = right_decompose(f1, f1.degree() / n);
	if (!rd) return std::nullopt;

	// f1 = R o h; need R(y) = f2(alpha y + beta). Compare depressed forms coefficientwise.
	LeftFactor out;
	out.h = rd->inner;
	out.u = depress_shift(rd->outer);
	out.v = depress_shift(f2);
	const BigRationalPoly rt = rd->outer.compose(BigRationalPoly{std::vector<Rational>{-out.u, Rational(1)}});
	const BigRationalPoly ft = f2.compose(BigRationalPoly{std::vector<Rational>{-out.v, Rational(1)}});
	if (rt.coeff(0) != ft.coeff(0)) return std::nullopt;
	BigRationalPoly g;
	for (int k = n; k >= 1; --k) {
		if (ft.coeff(k) == 0) {
			if (rt.coeff(k) != 0) return std::nullopt;
			continue;
		}
		const Rational q = rt.coeff(k) / ft.coeff(k);
		if (q == 0) return std::nullopt;
		g = gcd(g, BigRationalPoly::monomial(1, k) - BigRationalPoly::constant(q));
		if (g.degree() < 1) return std::nullopt;
	}
	out.alpha_poly = g;

	const Rational qn = rt.leading() / ft.leading();
	if (auto r = rational_root(qn, static_cast<unsigned>(n))) {
		for (const Rational& alpha : {*r, Rational(-*r)}) {
			if (g(alpha) != 0) continue;
			BigRationalPoly cand = out.g_for(alpha);
			if (!(f2.compose(cand) == f1)) throw std::logic_error("left factor failed verification");
			out.rational_g = std::move(cand);
			break;
		}
	}
	return out;
}

FreenessReport free_semigroup_finite_check(const SemigroupSystem& s, int depth, std::size_t node_budget)
{
	if (depth < 1) throw ContractError("free_semigroup_finite_check: depth must be >= 1");
	const auto degrees = s.degrees();
	const long maxdeg = *std::max_element(degrees.begin(), degrees.end());
	long composed = 1;
	std::size_t words = 0, level = 1;
	for (int l = 1; l <= depth; ++l) {
		composed *= maxdeg;
		level *= s.size();
		words += level;
		if (composed > kMaxComposedDegree)
			throw BudgetExceeded("free_semigroup_finite_check: composed degree " + std::to_string(composed) +
			                     " exceeds " + std::to_string(kMaxComposedDegree));
		if (words > node_budget) throw BudgetExceeded("free_semigroup_finite_check: more than " +
			                                          std::to_string(node_budget) + " words");
	}

	FreenessReport out;
	out.depth = depth;
	std::unordered_map<std::string, Word> seen;
	std::vector<std::pair<Word, RationalMapQ>> current;
	auto record = [&](Word w, RationalMapQ f) {
		++out.words_checked;
		auto [it, inserted] = seen.emplace(f.to_string(), w);
		if (!inserted) {
			out.equal_words = std::make_pair(it->second, w);
			return false;
		}
		current.emplace_back(std::move(w), std::move(f));
		return true;
	};
	for (std::uint32_t i = 1; i <= s.size(); ++i)
		if (!record(Word{{i}}, s.map(i))) return out;
	for (int l = 2; l <= depth; ++l) {
		auto prev = std::move(current);
		current.clear();
		for (std::uint32_t i = 1; i <= s.size(); ++i) {
			for (const auto& [w, f] : prev) {
				Word nw;
				nw.indices.push_back(i);
				nw.indices.insert(nw.indices.end(), w.indices.begin(), w.indices.end());
				if (!record(std::move(nw), s.map(i).compose(f))) return out;
			}
		}
	}
	return out;
}

RationalMapQ random_rational_map(int degree, int height, std::uint64_t seed)
{
	if (degree < 2 || height < 1) throw ContractError("random_rational_map: need degree >= 2 and height >= 1");
	std::mt19937_64 rng(seed);
	return draw_map(degree, height, rng);
}

SampleReport sample_good_family(const std::vector<int>& degrees, int attempts, int height, std::uint64_t seed)
{
	if (degrees.size() < 2) throw ContractError("sample_good_family: need at least two degrees");
	if (degrees[0] < 4 || degrees[1] < 4) throw ContractError("sample_good_family: d1 and d2 must be >= 4");
	for (int d : degrees)
		if (d < 2) throw ContractError("sample_good_family: every degree must be >= 2");
	if (height < 1) throw ContractError("sample_good_family: height must be >= 1");

	SampleReport out;
	out.degrees = degrees;
	out.attempts = attempts;
	out.height = height;
	out.seed = seed;
	for (int a = 0; a < attempts; ++a) {
		std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
		                  static_cast<std::uint32_t>(a)};
		std::mt19937_64 rng(seq);
		std::vector<RationalMapQ> maps;
		for (int d : degrees) maps.push_back(draw_map(d, height, rng));
		out.used_attempts = a + 1;
		const bool s1 = is_critically_simple(maps[0]);
		const bool s2 = is_critically_simple(maps[1]);
		out.first_not_simple += !s1;
		out.second_not_simple += !s2;
		if (!s1 || !s2) continue;
		if (!are_critically_separated(maps[0], maps[1])) {
			++out.not_separated;
			continue;
		}
		try {
			out.system.emplace(std::move(maps));
			return out;
		} catch (const ContractError&) {
			// two identical draws
		}
	}
	return out;
}

GenusConstants genus_constants(int d1, int d2)
{
	if (d1 < 2 || d2 < 2) throw ContractError("genus_constants: degrees must be >= 2");
	GenusConstants g;
	g.diag = std::min(long(d1 - 2) * (d1 - 2), long(d2 - 2) * (d2 - 2));
	g.cross = long(d1 - 1) * (d2 - 1);
	return g;
}

VerifyReport verify_system(const SemigroupSystem& s, const ProjectivePointQ& p, int depth)
{
	if (depth < 1) throw ContractError("verify: depth must be >= 1");
	VerifyReport out;
	out.depth = depth;
	std::vector<std::optional<BigRationalPoly>> polys;
	for (const auto& f : s.maps()) {
		MapVerdict v;
		v.degree = f.degree();
		v.critical = critical_values(f);
		v.critically_simple = is_squarefree(v.critical.chart_values);
		polys.push_back(f.affine_polynomial());
		if (polys.back()) v.power_like = is_power_like(*polys.back());
		out.maps.push_back(std::move(v));
	}
	bool ratmaps = false, poly = false;
	for (std::size_t i = 0; i < s.size(); ++i) {
		for (std::size_t j = i + 1; j < s.size(); ++j) {
			PairVerdict pv;
			pv.i = i + 1;
			pv.j = j + 1;
			const auto& mi = out.maps[i];
			const auto& mj = out.maps[j];
			pv.critically_separated = are_critically_separated(s.maps()[i], s.maps()[j]);
			pv.ratmaps_route = mi.degree >= 4 && mj.degree >= 4 && mi.critically_simple && mj.critically_simple &&
			                   pv.critically_separated;
			pv.both_polynomial = polys[i] && polys[j];
			if (pv.both_polynomial) {
				pv.first_over_second = left_compositional_factor(*polys[i], *polys[j]);
				pv.second_over_first = left_compositional_factor(*polys[j], *polys[i]);
				pv.poly_route = !mi.power_like->is_power_like && !mj.power_like->is_power_like &&
				                !pv.first_over_second && !pv.second_over_first;
			}
			ratmaps = ratmaps || pv.ratmaps_route;
			poly = poly || pv.poly_route;
			out.pairs.push_back(std::move(pv));
		}
	}
	out.route = ratmaps ? "ratmaps" : poly ? "poly" : "none";
	out.wandering = wandering_certificate(s, p, depth);
	out.preperiodic = moderately_preperiodic_search(s, p, depth);
	try {
		out.freeness = free_semigroup_finite_check(s, depth);
	} catch (const BudgetExceeded&) {
	}
	return out;
}

} // namespace orbmod
