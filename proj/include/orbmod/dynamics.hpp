#pragma once
// Characteristic-zero dynamics of a finite set of rational self-maps of P^1 over Q.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orbmod/exact_algebra.hpp"

namespace orbmod {

/// Degree-d self-map of P^1 given by [F(X,Z) : G(X,Z)], joint content 1, first nonzero
/// coefficient of F positive, Res(F, G) != 0.
class RationalMapQ {
public:
	RationalMapQ(const BinaryFormZ& numerator, const BinaryFormZ& denominator);

	// Coefficients in descending order (c_0 multiplies X^d); rationals are cleared jointly.
	static RationalMapQ from_coefficients(const std::vector<Rational>& num, const std::vector<Rational>& den);
	// f(x) as the map [F(X,Z) : Z^d].
	static RationalMapQ polynomial(const BigRationalPoly& f);
	// (p(x)) / (q(x)) homogenized to degree max(deg p, deg q).
	static RationalMapQ ratio(const BigRationalPoly& p, const BigRationalPoly& q);

	const BinaryFormZ& numerator() const noexcept { return num_; }
	const BinaryFormZ& denominator() const noexcept { return den_; }
	int degree() const noexcept { return num_.degree(); }
	const Integer& resultant() const noexcept { return res_; }
	Integer max_abs_coefficient() const;

	// True when the denominator form is c * Z^d.
	bool is_polynomial() const;
	// F(x,1) / c for polynomial maps.
	std::optional<BigRationalPoly> affine_polynomial() const;

	ProjectivePointQ operator()(const ProjectivePointQ& p) const;
	// this o inner
	RationalMapQ compose(const RationalMapQ& inner) const;

	friend bool operator==(const RationalMapQ& a, const RationalMapQ& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
	std::string to_string() const;

private:
	BinaryFormZ num_, den_;
	Integer res_;
};

inline ProjectivePointQ evaluate(const RationalMapQ& f, const ProjectivePointQ& p) { return f(p); }

/// Ordered list of maps f_1..f_r (indices are 1-based in words).
class SemigroupSystem {
public:
	explicit SemigroupSystem(std::vector<RationalMapQ> maps);

	std::size_t size() const noexcept { return maps_.size(); }
	const RationalMapQ& map(std::size_t one_based) const;
	const std::vector<RationalMapQ>& maps() const noexcept { return maps_; }
	std::vector<int> degrees() const;
	SemigroupSystem subsystem(const std::vector<std::size_t>& one_based_indices) const;

	// Stable text form of the normalized coefficients, used for hashing and reports.
	std::string canonical_string() const;

private:
	std::vector<RationalMapQ> maps_;
};

/// Composition word (i_1, ..., i_k) denoting f_{i_1} o ... o f_{i_k}; empty = identity.
/// Ordered by length, then lexicographically.
struct Word {
	std::vector<std::uint32_t> indices;

	std::size_t length() const noexcept { return indices.size(); }
	std::string to_string() const;

	friend bool operator==(const Word&, const Word&) = default;
	friend std::strong_ordering operator<=>(const Word& a, const Word& b)
	{
		if (auto c = a.indices.size() <=> b.indices.size(); c != 0) return c;
		return a.indices <=> b.indices;
	}
};

// All words of exactly `length` letters over [r], lexicographic.
std::vector<Word> words_of_length(std::size_t r, std::size_t length);

ProjectivePointQ word_evaluate(const SemigroupSystem& s, const Word& w, const ProjectivePointQ& p);
RationalMapQ word_map(const SemigroupSystem& s, const Word& w);

struct CollisionWitness {
	Word first;   // earlier in length-lex order
	Word second;
	ProjectivePointQ value;
};

struct NoCollisionUpToDepth {
	int depth;
	std::size_t words_checked;
};

using WanderingVerdict = std::variant<NoCollisionUpToDepth, CollisionWitness>;

inline constexpr std::size_t kDefaultNodeBudget = std::size_t{1} << 20;

// Compares the values of all words of length 1..depth; returns the first repeated value in
// length-lex order of the later word. Throws BudgetExceeded past node_budget words.
WanderingVerdict wandering_certificate(const SemigroupSystem& s, const ProjectivePointQ& p, int depth,
                                       std::size_t node_budget = kDefaultNodeBudget);

struct PreperiodicWitness {
	Word f;
	Word g;
};

// First (f, g), 1 <= |f|, |g| <= depth, with g(f(P)) = f(P).
std::optional<PreperiodicWitness> moderately_preperiodic_search(const SemigroupSystem& s, const ProjectivePointQ& p,
                                                                int depth,
                                                                std::size_t node_budget = kDefaultNodeBudget);

// |A_0 A'_1 - A_1 A'_0| for the normalized values of the two words.
Integer difference_ideal(const SemigroupSystem& s, const ProjectivePointQ& p, const Word& i, const Word& j);
Integer difference_ideal(const ProjectivePointQ& u, const ProjectivePointQ& v);

// Smallest k with r^k >= m + 1, i.e. ceil(log(m+1) / log r).
int word_length_for(std::uint64_t m, std::size_t r);

struct DPrimeResult {
	int k = 0;
	Integer value;        // product over ordered pairs i != j (the square of `unordered`)
	Integer unordered;    // product over unordered pairs
	std::map<std::uint64_t, std::uint64_t> factorization; // of `value`, primes below trial_bound
	Integer cofactor;     // part of `value` left after trial division
	std::optional<CollisionWitness> collision; // set when some B(i, j) = 0; value is then 0

	bool divisible_by(std::uint64_t p) const;
	double log_value() const; // log D'(m); requires value != 0
};

inline constexpr std::size_t kDefaultPairBudget = std::size_t{1} << 24;

DPrimeResult dprime(const SemigroupSystem& s, const ProjectivePointQ& p, std::uint64_t m,
                    std::uint64_t trial_bound = 10000, std::size_t pair_budget = kDefaultPairBudget);

// max over maps of log((d+1) * maxcoeff) + 1
double default_height_threshold(const SemigroupSystem& s);

// Breadth-first walk of Orb_S(P) (P itself first); first point with height > threshold.
// Throws NotFound if the orbit closes or `budget` points are visited first.
ProjectivePointQ height_escape_point(const SemigroupSystem& s, const ProjectivePointQ& p, double threshold,
                                     std::size_t budget = 100000);

} // namespace orbmod
