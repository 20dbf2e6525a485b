#include "orbmod/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "orbmod/primes.hpp"

namespace orbmod {

namespace {

using Coeffs = std::vector<Integer>;

Coeffs form_mul(const Coeffs& a, const Coeffs& b)
{
	Coeffs r(a.size() + b.size() - 1, Integer(0));
	for (std::size_t i = 0; i < a.size(); ++i) {
		if (a[i] == 0) continue;
		for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
	}
	return r;
}

// F(U, V) for a form F of degree d and forms U, V of equal degree e: a form of degree d*e.
Coeffs form_substitute(const BinaryFormZ& f, const Coeffs& u, const Coeffs& v)
{
	const int d = f.degree();
	std::vector<Coeffs> upow{Coeffs{1}}, vpow{Coeffs{1}};
	for (int i = 1; i <= d; ++i) {
		upow.push_back(form_mul(upow.back(), u));
		vpow.push_back(form_mul(vpow.back(), v));
	}
	Coeffs acc((u.size() - 1) * static_cast<std::size_t>(d) + 1, Integer(0));
	for (int i = 0; i <= d; ++i) {
		if (f[static_cast<std::size_t>(i)] == 0) continue;
		const Coeffs term = form_mul(upow[static_cast<std::size_t>(d - i)], vpow[static_cast<std::size_t>(i)]);
		for (std::size_t j = 0; j < term.size(); ++j) acc[j] += f[static_cast<std::size_t>(i)] * term[j];
	}
	return acc;
}

} // namespace

// ---------------------------------------------------------------------------
// RationalMapQ

RationalMapQ::RationalMapQ(const BinaryFormZ& numerator, const BinaryFormZ& denominator)
{
	if (numerator.degree() != denominator.degree())
		throw ContractError("numerator and denominator forms must have the same degree");
	if (numerator.degree() < 2) throw ContractError("maps must have degree >= 2");
	Integer g;
	mpz_gcd(g.get_mpz_t(), numerator.content().get_mpz_t(), denominator.content().get_mpz_t());
	if (g == 0) throw ContractError("both forms are zero");
	const auto& nc = numerator.coefficients();
	auto first = std::find_if(nc.begin(), nc.end(), [](const Integer& v) { return v != 0; });
	if (first == nc.end()) throw ContractError("numerator form is zero");
	if (*first < 0) g = -g;
	Coeffs n = numerator.coefficients(), d = denominator.coefficients();
	for (auto& v : n) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
	for (auto& v : d) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
	num_ = BinaryFormZ(std::move(n));
	den_ = BinaryFormZ(std::move(d));
	res_ = orbmod::resultant(num_, den_);
	if (res_ == 0) throw ContractError("forms share a root; not a morphism of degree " + std::to_string(degree()));
}

RationalMapQ RationalMapQ::from_coefficients(const std::vector<Rational>& num, const std::vector<Rational>& den)
{
	if (num.size() != den.size()) throw ContractError("num and den must list the same number of coefficients");
	Integer l = 1;
	for (const auto* v : {&num, &den})
		for (const auto& q : *v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
	auto clear = [&](const std::vector<Rational>& v) {
		Coeffs out;
		for (const auto& q : v) out.push_back(q.get_num() * (l / q.get_den()));
		return BinaryFormZ(std::move(out));
	};
	return RationalMapQ(clear(num), clear(den));
}

RationalMapQ RationalMapQ::polynomial(const BigRationalPoly& f)
{
	return ratio(f, BigRationalPoly::constant(1));
}

RationalMapQ RationalMapQ::ratio(const BigRationalPoly& p, const BigRationalPoly& q)
{
	if (p.is_zero() || q.is_zero()) throw ContractError("ratio of zero polynomial");
	const int d = std::max(p.degree(), q.degree());
	std::vector<Rational> n(static_cast<std::size_t>(d) + 1), m(static_cast<std::size_t>(d) + 1);
	for (int i = 0; i <= d; ++i) {
		n[static_cast<std::size_t>(d - i)] = p.coeff(i);
		m[static_cast<std::size_t>(d - i)] = q.coeff(i);
	}
	return from_coefficients(n, m);
}

Integer RationalMapQ::max_abs_coefficient() const
{
	Integer m = 0;
	for (const auto* f : {&num_, &den_})
		for (const auto& c : f->coefficients())
			if (abs(c) > m) m = abs(c);
	return m;
}

bool RationalMapQ::is_polynomial() const
{
	const auto& c = den_.coefficients();
	return std::all_of(c.begin(), c.end() - 1, [](const Integer& v) { return v == 0; });
}

std::optional<BigRationalPoly> RationalMapQ::affine_polynomial() const
{
	if (!is_polynomial()) return std::nullopt;
	return num_.affine() * (Rational(1) / Rational(den_.coefficients().back()));
}

ProjectivePointQ RationalMapQ::operator()(const ProjectivePointQ& p) const
{
	return normalize_point(num_(p.a(), p.b()), den_(p.a(), p.b()));
}

RationalMapQ RationalMapQ::compose(const RationalMapQ& inner) const
{
	const Coeffs& u = inner.num_.coefficients();
	const Coeffs& v = inner.den_.coefficients();
	return RationalMapQ(BinaryFormZ(form_substitute(num_, u, v)), BinaryFormZ(form_substitute(den_, u, v)));
}

std::string RationalMapQ::to_string() const { return "{num: " + num_.to_string() + ", den: " + den_.to_string() + "}"; }

// ---------------------------------------------------------------------------
// SemigroupSystem

SemigroupSystem::SemigroupSystem(std::vector<RationalMapQ> maps) : maps_(std::move(maps))
{
	if (maps_.empty()) throw ContractError("a system needs at least one map");
	for (std::size_t i = 0; i < maps_.size(); ++i)
		for (std::size_t j = i + 1; j < maps_.size(); ++j)
			if (maps_[i] == maps_[j])
				throw ContractError("maps " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " are identical");
}

const RationalMapQ& SemigroupSystem::map(std::size_t one_based) const
{
	if (one_based < 1 || one_based > maps_.size())
		throw ContractError("map index " + std::to_string(one_based) + " out of range 1.." + std::to_string(maps_.size()));
	return maps_[one_based - 1];
}

std::vector<int> SemigroupSystem::degrees() const
{
	std::vector<int> d;
	for (const auto& f : maps_) d.push_back(f.degree());
	return d;
}

SemigroupSystem SemigroupSystem::subsystem(const std::vector<std::size_t>& one_based_indices) const
{
	std::vector<RationalMapQ> sub;
	for (auto i : one_based_indices) sub.push_back(map(i));
	return SemigroupSystem(std::move(sub));
}

std::string SemigroupSystem::canonical_string() const
{
	std::string s;
	for (const auto& f : maps_) s += f.to_string() + ";";
	return s;
}

// ---------------------------------------------------------------------------
// Words

std::string Word::to_string() const
{
	std::string s = "(";
	for (std::size_t i = 0; i < indices.size(); ++i) s += (i ? "," : "") + std::to_string(indices[i]);
	return s + ")";
}

std::vector<Word> words_of_length(std::size_t r, std::size_t length)
{
	std::vector<Word> out{Word{}};
	for (std::size_t l = 0; l < length; ++l) {
		std::vector<Word> next;
		next.reserve(out.size() * r);
		for (std::uint32_t i = 1; i <= r; ++i)
			for (const auto& w : out) {
				Word x;
				x.indices.reserve(w.length() + 1);
				x.indices.push_back(i);
				x.indices.insert(x.indices.end(), w.indices.begin(), w.indices.end());
				next.push_back(std::move(x));
			}
		out = std::move(next);
	}
	return out;
}

ProjectivePointQ word_evaluate(const SemigroupSystem& s, const Word& w, const ProjectivePointQ& p)
{
	for (auto i : w.indices) s.map(i); // range check before evaluating
	ProjectivePointQ q = p;
	for (auto it = w.indices.rbegin(); it != w.indices.rend(); ++it) q = s.map(*it)(q);
	return q;
}

RationalMapQ word_map(const SemigroupSystem& s, const Word& w)
{
	if (w.indices.empty()) throw ContractError("the empty word is the identity, which is not a map of degree >= 2");
	RationalMapQ acc = s.map(w.indices.back());
	for (auto it = w.indices.rbegin() + 1; it != w.indices.rend(); ++it) acc = s.map(*it).compose(acc);
	return acc;
}

namespace {

// One level of the word tree: words of a fixed length in lex order with their values.
struct Level {
	std::vector<Word> words;
	std::vector<ProjectivePointQ> values;
};

Level extend(const SemigroupSystem& s, const Level& prev)
{
	Level next;
	const std::size_t r = s.size();
	next.words.reserve(prev.words.size() * r);
	next.values.reserve(prev.words.size() * r);
	for (std::uint32_t i = 1; i <= r; ++i) {
		const RationalMapQ& f = s.map(i);
		for (std::size_t k = 0; k < prev.words.size(); ++k) {
			Word w;
			w.indices.push_back(i);
			w.indices.insert(w.indices.end(), prev.words[k].indices.begin(), prev.words[k].indices.end());
			next.words.push_back(std::move(w));
			next.values.push_back(f(prev.values[k]));
		}
	}
	return next;
}

} // namespace

WanderingVerdict wandering_certificate(const SemigroupSystem& s, const ProjectivePointQ& p, int depth,
                                       std::size_t node_budget)
{
	if (depth < 1) throw ContractError("wandering_certificate: depth must be >= 1");
	// value -> (level, index) of the first word reaching it
	std::unordered_map<ProjectivePointQ, std::pair<int, std::size_t>, ProjectivePointHash> seen;
	std::vector<Level> levels;
	levels.push_back(Level{{Word{}}, {p}});
	std::size_t checked = 0;
	for (int len = 1; len <= depth; ++len) {
		const std::size_t upcoming = levels.back().words.size() * s.size();
		if (checked + upcoming > node_budget)
			throw BudgetExceeded("wandering_certificate: more than " + std::to_string(node_budget) + " words");
		levels.push_back(extend(s, levels.back()));
		const Level& lv = levels.back();
		for (std::size_t k = 0; k < lv.words.size(); ++k) {
			++checked;
			auto [it, inserted] = seen.try_emplace(lv.values[k], len, k);
			if (!inserted) {
				const auto [l0, k0] = it->second;
				return CollisionWitness{levels[static_cast<std::size_t>(l0)].words[k0], lv.words[k], lv.values[k]};
			}
		}
	}
	return NoCollisionUpToDepth{depth, checked};
}

std::optional<PreperiodicWitness> moderately_preperiodic_search(const SemigroupSystem& s, const ProjectivePointQ& p,
                                                                int depth, std::size_t node_budget)
{
	if (depth < 1) throw ContractError("moderately_preperiodic_search: depth must be >= 1");
	std::size_t spent = 0;
	auto charge = [&](std::size_t n) {
		spent += n;
		if (spent > node_budget)
			throw BudgetExceeded("moderately_preperiodic_search: more than " + std::to_string(node_budget) + " evaluations");
	};
	std::unordered_set<ProjectivePointQ, ProjectivePointHash> tried;
	Level outer{{Word{}}, {p}};
	for (int flen = 1; flen <= depth; ++flen) {
		charge(outer.words.size() * s.size());
		outer = extend(s, outer);
		for (std::size_t k = 0; k < outer.words.size(); ++k) {
			const ProjectivePointQ& q = outer.values[k];
			if (!tried.insert(q).second) continue;
			Level inner{{Word{}}, {q}};
			for (int glen = 1; glen <= depth; ++glen) {
				charge(inner.words.size() * s.size());
				inner = extend(s, inner);
				for (std::size_t j = 0; j < inner.words.size(); ++j)
					if (inner.values[j] == q) return PreperiodicWitness{outer.words[k], inner.words[j]};
			}
		}
	}
	return std::nullopt;
}

Integer difference_ideal(const ProjectivePointQ& u, const ProjectivePointQ& v)
{
	return abs(u.a() * v.b() - u.b() * v.a());
}

Integer difference_ideal(const SemigroupSystem& s, const ProjectivePointQ& p, const Word& i, const Word& j)
{
	if (i == j) throw ContractError("difference_ideal: words must differ");
	return difference_ideal(word_evaluate(s, i, p), word_evaluate(s, j, p));
}

int word_length_for(std::uint64_t m, std::size_t r)
{
	if (r < 2) throw ContractError("word length needs r >= 2");
	int k = 0;
	unsigned __int128 power = 1;
	while (power < static_cast<unsigned __int128>(m) + 1) {
		power *= r;
		++k;
	}
	return k;
}

bool DPrimeResult::divisible_by(std::uint64_t p) const
{
	if (collision) return true; // 0 is divisible by everything
	return mpz_divisible_ui_p(unordered.get_mpz_t(), p) != 0;
}

double DPrimeResult::log_value() const
{
	if (collision || unordered == 0) throw ContractError("log of D'(m) = 0");
	return 2.0 * log_abs(unordered);
}

DPrimeResult dprime(const SemigroupSystem& s, const ProjectivePointQ& p, std::uint64_t m, std::uint64_t trial_bound,
                    std::size_t pair_budget)
{
	const std::size_t r = s.size();
	if (r < 2) throw ContractError("dprime needs r >= 2");
	if (m < 1) throw ContractError("dprime needs m >= 1");
	DPrimeResult out;
	out.k = word_length_for(m, r);
	long double n_words = std::pow(static_cast<long double>(r), out.k);
	if (n_words * (n_words - 1) / 2 > static_cast<long double>(pair_budget))
		throw BudgetExceeded("dprime: r^k pair count exceeds budget at k = " + std::to_string(out.k));

	Level lv{{Word{}}, {p}};
	for (int i = 0; i < out.k; ++i) lv = extend(s, lv);

	std::unordered_map<ProjectivePointQ, std::size_t, ProjectivePointHash> first;
	for (std::size_t i = 0; i < lv.words.size(); ++i) {
		auto [it, inserted] = first.try_emplace(lv.values[i], i);
		if (!inserted) {
			out.collision = CollisionWitness{lv.words[it->second], lv.words[i], lv.values[i]};
			out.value = out.unordered = out.cofactor = 0;
			return out;
		}
	}

	const auto small_primes = trial_bound >= 2 ? primes_up_to(trial_bound - 1) : std::vector<std::uint64_t>{};
	std::map<std::uint64_t, std::uint64_t> unordered_exp;
	Integer leftover = 1;
	std::vector<Integer> terms;
	terms.reserve(lv.words.size() * (lv.words.size() - 1) / 2);
	for (std::size_t i = 0; i < lv.words.size(); ++i) {
		for (std::size_t j = i + 1; j < lv.words.size(); ++j) {
			Integer b = difference_ideal(lv.values[i], lv.values[j]);
			if (!small_primes.empty()) {
				Integer rest = b;
				for (auto q : small_primes) {
					if (mpz_divisible_ui_p(rest.get_mpz_t(), q) == 0) continue;
					const Integer qz(static_cast<unsigned long>(q));
					unordered_exp[q] += mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), qz.get_mpz_t());
				}
				leftover *= rest;
			}
			terms.push_back(std::move(b));
		}
	}
	// balanced product tree keeps the multiplication cost near-linear
	while (terms.size() > 1) {
		std::vector<Integer> next;
		next.reserve((terms.size() + 1) / 2);
		for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] * terms[i + 1]);
		if (terms.size() % 2) next.push_back(std::move(terms.back()));
		terms = std::move(next);
	}
	out.unordered = terms.empty() ? Integer(1) : terms.front();
	out.value = out.unordered * out.unordered;
	for (auto [q, e] : unordered_exp) out.factorization[q] = 2 * e;
	out.cofactor = small_primes.empty() ? out.value : Integer(leftover * leftover);
	return out;
}

double default_height_threshold(const SemigroupSystem& s)
{
	double best = 0.0;
	for (const auto& f : s.maps()) {
		const double v = std::log(static_cast<double>(f.degree() + 1)) + log_abs(f.max_abs_coefficient());
		best = std::max(best, v);
	}
	return best + 1.0;
}

ProjectivePointQ height_escape_point(const SemigroupSystem& s, const ProjectivePointQ& p, double threshold,
                                     std::size_t budget)
{
	if (threshold < 0) throw ContractError("height_escape_point: threshold must be >= 0");
	std::unordered_set<ProjectivePointQ, ProjectivePointHash> seen{p};
	std::deque<ProjectivePointQ> queue{p};
	while (!queue.empty()) {
		ProjectivePointQ q = std::move(queue.front());
		queue.pop_front();
		if (weil_height(q) > threshold) return q;
		for (const auto& f : s.maps()) {
			ProjectivePointQ img = f(q);
			if (seen.insert(img).second) {
				if (seen.size() > budget)
					throw NotFound("height_escape_point: budget of " + std::to_string(budget) + " points exhausted");
				queue.push_back(std::move(img));
			}
		}
	}
	throw NotFound("height_escape_point: orbit is finite (" + std::to_string(seen.size()) + " points) below threshold");
}

} // namespace orbmod
