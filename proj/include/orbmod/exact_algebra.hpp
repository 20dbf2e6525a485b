#pragma once
// Exact integers, rationals, univariate polynomials over Q and binary forms over Z.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbmod/errors.hpp"

namespace orbmod {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "n", "-n", "p/q". Throws ContractError on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

// Natural log of |n| for arbitrarily large n (n != 0).
double log_abs(const Integer& n);

/// Dense polynomial over Q, coefficients in ascending degree order.
/// The zero polynomial has no stored coefficients; degree() reports 0 for it.
class BigRationalPoly {
public:
	BigRationalPoly() = default;
	explicit BigRationalPoly(std::vector<Rational> ascending);
	BigRationalPoly(std::initializer_list<long> ascending);

	static BigRationalPoly constant(const Rational& c);
	static BigRationalPoly monomial(const Rational& c, int degree);
	static BigRationalPoly x() { return monomial(1, 1); }

	bool is_zero() const noexcept { return c_.empty(); }
	int degree() const noexcept { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
	Rational coeff(int i) const;
	const Rational& leading() const;
	const std::vector<Rational>& coefficients() const noexcept { return c_; }

	Rational operator()(const Rational& x) const;
	BigRationalPoly derivative() const;
	BigRationalPoly monic() const;
	// this(inner(x))
	BigRationalPoly compose(const BigRationalPoly& inner) const;
	BigRationalPoly pow(unsigned e) const;

	BigRationalPoly& operator+=(const BigRationalPoly& o);
	BigRationalPoly& operator-=(const BigRationalPoly& o);
	BigRationalPoly& operator*=(const BigRationalPoly& o);
	BigRationalPoly& operator*=(const Rational& s);
	friend BigRationalPoly operator+(BigRationalPoly a, const BigRationalPoly& b) { return a += b; }
	friend BigRationalPoly operator-(BigRationalPoly a, const BigRationalPoly& b) { return a -= b; }
	friend BigRationalPoly operator*(BigRationalPoly a, const BigRationalPoly& b) { return a *= b; }
	friend BigRationalPoly operator*(BigRationalPoly a, const Rational& s) { return a *= s; }
	friend BigRationalPoly operator*(const Rational& s, BigRationalPoly a) { return a *= s; }
	BigRationalPoly operator-() const;

	friend bool operator==(const BigRationalPoly&, const BigRationalPoly&) = default;

	std::string to_string(std::string_view var = "x") const;

private:
	void trim();
	std::vector<Rational> c_;
};

struct PolyDivision {
	BigRationalPoly quotient;
	BigRationalPoly remainder;
};
PolyDivision divide(const BigRationalPoly& num, const BigRationalPoly& den);

// Monic gcd; gcd(0, 0) = 0.
BigRationalPoly gcd(BigRationalPoly a, BigRationalPoly b);

bool is_squarefree(const BigRationalPoly& f);

// Yun's algorithm: f = lc * prod_i factors[i].first ^ factors[i].second, factors monic and
// pairwise coprime, constant factors dropped.
std::vector<std::pair<BigRationalPoly, int>> squarefree_decomposition(const BigRationalPoly& f);

// Scales f by a positive rational so the coefficients are coprime integers (ascending order).
std::vector<Integer> primitive_integer_coefficients(const BigRationalPoly& f);

// Lagrange interpolation through (xs[i], ys[i]); xs pairwise distinct.
BigRationalPoly interpolate(std::span<const Rational> xs, std::span<const Rational> ys);

/// Binary form c_0 X^d + c_1 X^{d-1} Z + ... + c_d Z^d with integer coefficients.
class BinaryFormZ {
public:
	BinaryFormZ() = default;
	explicit BinaryFormZ(std::vector<Integer> descending);
	BinaryFormZ(std::initializer_list<long> descending);

	int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
	const std::vector<Integer>& coefficients() const noexcept { return c_; }
	const Integer& operator[](std::size_t i) const { return c_[i]; }
	bool is_zero() const;

	Integer content() const;
	// Content 1 and first nonzero coefficient positive.
	BinaryFormZ normalized() const;

	Integer operator()(const Integer& x, const Integer& z) const;

	// Dehomogenization F(x, 1) as a polynomial over Q.
	BigRationalPoly affine() const;
	// Homogenizes f to formal degree d (d >= deg f); rational coefficients are cleared by
	// the lcm of denominators, no content reduction.
	static BinaryFormZ from_affine(const BigRationalPoly& f, int d);

	BinaryFormZ partial_x() const;
	BinaryFormZ partial_z() const;

	friend bool operator==(const BinaryFormZ&, const BinaryFormZ&) = default;
	std::string to_string() const;

private:
	std::vector<Integer> c_;
};

// Fraction-free (Bareiss) determinant of a square matrix, row-major, n*n entries.
Integer determinant(std::vector<Integer> m, std::size_t n);

// Sylvester resultant of two coefficient vectors in descending order, of formal degrees
// a.size()-1 and b.size()-1. Leading zeros are allowed: the value is then the resultant of
// the corresponding binary forms.
Integer sylvester_resultant(std::span<const Integer> a, std::span<const Integer> b);

// Resultant of two binary forms of the same degree d >= 1.
Integer resultant(const BinaryFormZ& f, const BinaryFormZ& g);

// Resultant of two nonzero polynomials over Q at their actual degrees, after scaling each to
// primitive integer coefficients. Zero iff they share a root over the algebraic closure.
Integer resultant(const BigRationalPoly& f, const BigRationalPoly& g);

/// Point of P^1(Q) as coprime integers [a:b] with b > 0, or [1:0].
class ProjectivePointQ {
public:
	ProjectivePointQ() : a_(0), b_(1) {}
	const Integer& a() const noexcept { return a_; }
	const Integer& b() const noexcept { return b_; }
	bool is_infinity() const { return b_ == 0; }

	friend bool operator==(const ProjectivePointQ&, const ProjectivePointQ&) = default;
	std::string to_string() const;

	friend ProjectivePointQ normalize_point(const Rational& a, const Rational& b);
	friend ProjectivePointQ normalize_point(Integer a, Integer b);

private:
	Integer a_, b_;
};

ProjectivePointQ normalize_point(const Rational& a, const Rational& b);
ProjectivePointQ normalize_point(Integer a, Integer b);
inline ProjectivePointQ affine_point(const Rational& x) { return normalize_point(x, Rational(1)); }
inline ProjectivePointQ infinity_point() { return normalize_point(Integer(1), Integer(0)); }

// log max(|a|, |b|).
double weil_height(const ProjectivePointQ& p);

struct ProjectivePointHash {
	std::size_t operator()(const ProjectivePointQ& p) const noexcept;
};

} // namespace orbmod
