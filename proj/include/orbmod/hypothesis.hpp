#pragma once
// Decision procedures for the map-level hypotheses: critical values, critical simplicity and
// separation, power-like polynomials, compositional left factors, finite freeness checks.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbmod/dynamics.hpp"
#include "orbmod/exact_algebra.hpp"

namespace orbmod {

/// Target coordinate change w -> (a w + b) / (c w + e), det != 0.
struct Mobius {
	long a = 1, b = 0, c = 0, e = 1;
	bool is_identity() const { return a == 1 && b == 0 && c == 0 && e == 1; }
	friend bool operator==(const Mobius&, const Mobius&) = default;
};

// Coordinate changes tried in order: identity, then 32 seeded draws with entries in [-7, 7].
inline constexpr int kMobiusTries = 32;

// D(w) up to a nonzero constant: Res(dH/dX, dH/dZ) for H = F - w G. Degree <= 2d - 2; the
// deficit is the multiplicity of infinity as a critical value.
BigRationalPoly critical_value_poly(const BinaryFormZ& num, const BinaryFormZ& den);

struct CriticalData {
	int degree = 0;                                        // d
	BigRationalPoly values;                                // D(w) in the original coordinate
	std::vector<std::pair<BigRationalPoly, int>> profile;  // squarefree decomposition of `values`
	int infinity_multiplicity = 0;                         // 2d - 2 - deg D
	bool infinity_is_critical_value() const { return infinity_multiplicity > 0; }
	Mobius chart;                // first coordinate change with infinity non-critical
	BigRationalPoly chart_values; // D(w) after the change, degree exactly 2d - 2
	int total_multiplicity() const;
};

// Throws std::logic_error if no coordinate in the schedule makes infinity non-critical.
CriticalData critical_values(const RationalMapQ& f);

bool is_critically_simple(const RationalMapQ& f);
bool are_critically_separated(const RationalMapQ& f, const RationalMapQ& g);

// T_n with T_n(cos t) = cos(n t).
BigRationalPoly chebyshev(int n);

// lambda^-n T_n(lambda x); rational whenever lambda^2 is.
BigRationalPoly scaled_chebyshev(int n, const Rational& lambda_sq);

struct RightDecomposition {
	BigRationalPoly outer; // R, degree deg f / n
	BigRationalPoly inner; // h, monic, h(0) = 0, degree n
};

// The unique f = R o h with h monic of degree n and h(0) = 0, if it exists. n must divide deg f.
std::optional<RightDecomposition> right_decompose(const BigRationalPoly& f, int n);

enum class InnerKind { power, chebyshev };

/// f = outer( lambda^-n C(lambda (x + shift)) ) with C = x^n or T_n. For the power kind
/// lambda_sq is 1 and the inner map is (x + shift)^n.
struct PowerLikeWitness {
	BigRationalPoly outer;
	InnerKind kind = InnerKind::power;
	int n = 0;
	Rational lambda_sq = 1;
	Rational shift = 0;

	BigRationalPoly inner() const;
	BigRationalPoly recompose() const;
	std::string to_string() const;
};

struct PowerLikeVerdict {
	bool is_power_like = false;
	std::optional<PowerLikeWitness> witness;
};

PowerLikeVerdict is_power_like(const BigRationalPoly& f);

/// f1 = f2 o g for g = alpha (h + u) - v, alpha any root of `alpha_poly`.
struct LeftFactor {
	BigRationalPoly h;
	Rational u, v;
	BigRationalPoly alpha_poly;  // monic, over Q
	std::optional<BigRationalPoly> rational_g; // set when some alpha is rational

	BigRationalPoly g_for(const Rational& alpha) const;
};

// Decides over the algebraic closure whether f1 = f2 o g with deg g >= 2.
std::optional<LeftFactor> left_compositional_factor(const BigRationalPoly& f1, const BigRationalPoly& f2);

struct FreenessReport {
	int depth = 0;
	std::size_t words_checked = 0;
	std::optional<std::pair<Word, Word>> equal_words;
	bool distinct() const { return !equal_words; }
};

inline constexpr int kMaxComposedDegree = 1 << 12;

// Compares the maps of all words of length 1..depth. Throws BudgetExceeded when some word
// would exceed kMaxComposedDegree or more than node_budget words are needed.
FreenessReport free_semigroup_finite_check(const SemigroupSystem& s, int depth,
                                           std::size_t node_budget = std::size_t{1} << 16);

struct SampleReport {
	std::vector<int> degrees;
	int attempts = 0;
	int height = 0;
	std::uint64_t seed = 0;
	std::optional<SemigroupSystem> system;
	int used_attempts = 0;
	int first_not_simple = 0;
	int second_not_simple = 0;
	int not_separated = 0;
};

// Attempt i draws from a generator seeded with (seed, i). Throws ContractError unless
// r >= 2, d1, d2 >= 4 and every d_i >= 2.
SampleReport sample_good_family(const std::vector<int>& degrees, int attempts, int height, std::uint64_t seed = 1);

RationalMapQ random_rational_map(int degree, int height, std::uint64_t seed);

struct GenusConstants {
	long diag = 0;  // min over the pair of (d_i - 2)^2
	long cross = 0; // (d1 - 1)(d2 - 1)
	bool both_at_least_two() const { return diag >= 2 && cross >= 2; }
};

GenusConstants genus_constants(int d1, int d2);

struct MapVerdict {
	int degree = 0;
	CriticalData critical;
	bool critically_simple = false;
	std::optional<PowerLikeVerdict> power_like; // polynomials only
};

struct PairVerdict {
	std::size_t i = 0, j = 0; // 1-based
	bool critically_separated = false;
	bool ratmaps_route = false;
	bool both_polynomial = false;
	std::optional<LeftFactor> first_over_second;  // f_i = f_j o g
	std::optional<LeftFactor> second_over_first;  // f_j = f_i o g
	bool poly_route = false;
};

struct VerifyReport {
	std::vector<MapVerdict> maps;
	std::vector<PairVerdict> pairs;
	std::string route; // "ratmaps", "poly" or "none"
	int depth = 0;
	WanderingVerdict wandering;
	std::optional<PreperiodicWitness> preperiodic;
	std::optional<FreenessReport> freeness; // empty when over budget
};

VerifyReport verify_system(const SemigroupSystem& s, const ProjectivePointQ& p, int depth);

} // namespace orbmod
