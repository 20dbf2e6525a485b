#include "orbmod/exact_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orbmod {

Rational parse_rational(std::string_view text)
{
	auto trim = [](std::string_view s) {
		while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
		while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
		return s;
	};
	auto parse_int = [](std::string_view s) {
		if (s.empty()) throw ContractError("empty integer literal");
		std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
		if (i == s.size()) throw ContractError("malformed integer literal '" + std::string(s) + "'");
		for (std::size_t j = i; j < s.size(); ++j)
			if (!std::isdigit(static_cast<unsigned char>(s[j])))
				throw ContractError("malformed integer literal '" + std::string(s) + "'");
		std::string digits(s.substr(s[0] == '+' ? 1 : 0));
		return Integer(digits, 10);
	};

	text = trim(text);
	const auto slash = text.find('/');
	if (slash == std::string_view::npos) return Rational(parse_int(text));
	const Integer num = parse_int(trim(text.substr(0, slash)));
	const Integer den = parse_int(trim(text.substr(slash + 1)));
	if (den == 0) throw ContractError("zero denominator in '" + std::string(text) + "'");
	Rational q(num, den);
	q.canonicalize();
	return q;
}

double log_abs(const Integer& n)
{
	if (n == 0) throw ContractError("log_abs(0)");
	long exp = 0;
	const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
	return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

// ---------------------------------------------------------------------------
// BigRationalPoly

BigRationalPoly::BigRationalPoly(std::vector<Rational> ascending) : c_(std::move(ascending))
{
	for (auto& q : c_) q.canonicalize();
	trim();
}

BigRationalPoly::BigRationalPoly(std::initializer_list<long> ascending)
{
	for (long v : ascending) c_.emplace_back(v);
	trim();
}

BigRationalPoly BigRationalPoly::constant(const Rational& c) { return BigRationalPoly(std::vector<Rational>{c}); }

BigRationalPoly BigRationalPoly::monomial(const Rational& c, int degree)
{
	std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
	v.back() = c;
	return BigRationalPoly(std::move(v));
}

void BigRationalPoly::trim()
{
	while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational BigRationalPoly::coeff(int i) const
{
	if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
	return c_[static_cast<std::size_t>(i)];
}

const Rational& BigRationalPoly::leading() const
{
	if (c_.empty()) throw ContractError("leading coefficient of the zero polynomial");
	return c_.back();
}

Rational BigRationalPoly::operator()(const Rational& x) const
{
	Rational acc(0);
	for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
	return acc;
}

BigRationalPoly BigRationalPoly::derivative() const
{
	if (c_.size() <= 1) return {};
	std::vector<Rational> d(c_.size() - 1);
	for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
	return BigRationalPoly(std::move(d));
}

BigRationalPoly BigRationalPoly::monic() const
{
	if (c_.empty()) return {};
	BigRationalPoly r = *this;
	const Rational inv = 1 / leading();
	for (auto& q : r.c_) q *= inv;
	return r;
}

BigRationalPoly BigRationalPoly::compose(const BigRationalPoly& inner) const
{
	BigRationalPoly acc;
	for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
		acc *= inner;
		acc += constant(*it);
	}
	return acc;
}

BigRationalPoly BigRationalPoly::pow(unsigned e) const
{
	BigRationalPoly result = constant(1), base = *this;
	while (e) {
		if (e & 1u) result *= base;
		e >>= 1u;
		if (e) base *= base;
	}
	return result;
}

BigRationalPoly& BigRationalPoly::operator+=(const BigRationalPoly& o)
{
	if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
	for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
	trim();
	return *this;
}

BigRationalPoly& BigRationalPoly::operator-=(const BigRationalPoly& o)
{
	if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
	for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
	trim();
	return *this;
}

BigRationalPoly& BigRationalPoly::operator*=(const BigRationalPoly& o)
{
	if (c_.empty() || o.c_.empty()) {
		c_.clear();
		return *this;
	}
	std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
	for (std::size_t i = 0; i < c_.size(); ++i) {
		if (c_[i] == 0) continue;
		for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
	}
	c_ = std::move(r);
	trim();
	return *this;
}

BigRationalPoly& BigRationalPoly::operator*=(const Rational& s)
{
	for (auto& q : c_) q *= s;
	trim();
	return *this;
}

BigRationalPoly BigRationalPoly::operator-() const
{
	BigRationalPoly r = *this;
	for (auto& q : r.c_) q = -q;
	return r;
}

std::string BigRationalPoly::to_string(std::string_view var) const
{
	if (c_.empty()) return "0";
	std::ostringstream os;
	bool first = true;
	for (int i = degree(); i >= 0; --i) {
		const Rational& q = c_[static_cast<std::size_t>(i)];
		if (q == 0) continue;
		Rational mag = abs(q);
		if (first) {
			if (q < 0) os << "-";
		} else {
			os << (q < 0 ? " - " : " + ");
		}
		first = false;
		if (i == 0 || mag != 1) {
			os << mag.get_str();
			if (i > 0) os << "*";
		}
		if (i >= 1) os << var;
		if (i >= 2) os << "^" << i;
	}
	return os.str();
}

PolyDivision divide(const BigRationalPoly& num, const BigRationalPoly& den)
{
	if (den.is_zero()) throw ContractError("polynomial division by zero");
	std::vector<Rational> rem = num.coefficients();
	const int dn = den.degree();
	if (num.is_zero() || num.degree() < dn) return {BigRationalPoly{}, num};
	std::vector<Rational> quo(static_cast<std::size_t>(num.degree() - dn) + 1, Rational(0));
	const Rational inv_lead = 1 / den.leading();
	for (int i = num.degree(); i >= dn; --i) {
		const Rational q = rem[static_cast<std::size_t>(i)] * inv_lead;
		quo[static_cast<std::size_t>(i - dn)] = q;
		if (q == 0) continue;
		for (int j = 0; j <= dn; ++j) rem[static_cast<std::size_t>(i - dn + j)] -= q * den.coeff(j);
	}
	return {BigRationalPoly(std::move(quo)), BigRationalPoly(std::move(rem))};
}

BigRationalPoly gcd(BigRationalPoly a, BigRationalPoly b)
{
	while (!b.is_zero()) {
		BigRationalPoly r = divide(a, b).remainder;
		a = std::move(b);
		b = std::move(r);
	}
	return a.monic();
}

bool is_squarefree(const BigRationalPoly& f)
{
	if (f.is_zero()) throw ContractError("is_squarefree of the zero polynomial");
	return gcd(f, f.derivative()).degree() == 0;
}

std::vector<std::pair<BigRationalPoly, int>> squarefree_decomposition(const BigRationalPoly& f)
{
	if (f.is_zero()) throw ContractError("squarefree decomposition of the zero polynomial");
	std::vector<std::pair<BigRationalPoly, int>> out;
	if (f.degree() == 0) return out;
	const BigRationalPoly fm = f.monic();
	const BigRationalPoly a0 = gcd(fm, fm.derivative());
	BigRationalPoly b = divide(fm, a0).quotient;
	BigRationalPoly c = divide(fm.derivative(), a0).quotient;
	BigRationalPoly d = c - b.derivative();
	for (int i = 1; b.degree() > 0; ++i) {
		BigRationalPoly a = gcd(b, d);
		if (a.degree() > 0) out.emplace_back(a, i);
		b = divide(b, a).quotient;
		c = divide(d, a).quotient;
		d = c - b.derivative();
	}
	return out;
}

std::vector<Integer> primitive_integer_coefficients(const BigRationalPoly& f)
{
	Integer l = 1;
	for (const auto& q : f.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
	std::vector<Integer> out;
	Integer g = 0;
	for (const auto& q : f.coefficients()) {
		out.push_back(q.get_num() * (l / q.get_den()));
		mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
	}
	if (g > 1)
		for (auto& v : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
	return out;
}

BigRationalPoly interpolate(std::span<const Rational> xs, std::span<const Rational> ys)
{
	if (xs.size() != ys.size()) throw ContractError("interpolate: size mismatch");
	BigRationalPoly result;
	for (std::size_t i = 0; i < xs.size(); ++i) {
		if (ys[i] == 0) continue;
		BigRationalPoly basis = BigRationalPoly::constant(1);
		Rational denom(1);
		for (std::size_t j = 0; j < xs.size(); ++j) {
			if (j == i) continue;
			basis *= BigRationalPoly(std::vector<Rational>{-xs[j], Rational(1)});
			denom *= xs[i] - xs[j];
		}
		result += basis * (ys[i] / denom);
	}
	return result;
}

// ---------------------------------------------------------------------------
// BinaryFormZ

BinaryFormZ::BinaryFormZ(std::vector<Integer> descending) : c_(std::move(descending))
{
	if (c_.empty()) throw ContractError("binary form needs at least one coefficient");
}

BinaryFormZ::BinaryFormZ(std::initializer_list<long> descending)
{
	for (long v : descending) c_.emplace_back(v);
	if (c_.empty()) throw ContractError("binary form needs at least one coefficient");
}

bool BinaryFormZ::is_zero() const
{
	return std::all_of(c_.begin(), c_.end(), [](const Integer& v) { return v == 0; });
}

Integer BinaryFormZ::content() const
{
	Integer g = 0;
	for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
	return g;
}

BinaryFormZ BinaryFormZ::normalized() const
{
	BinaryFormZ r = *this;
	const Integer g = content();
	if (g == 0) return r;
	auto first = std::find_if(c_.begin(), c_.end(), [](const Integer& v) { return v != 0; });
	const Integer s = (*first < 0) ? Integer(-g) : g;
	for (auto& v : r.c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), s.get_mpz_t());
	return r;
}

Integer BinaryFormZ::operator()(const Integer& x, const Integer& z) const
{
	// sum c_i x^{d-i} z^i, Horner in x with running powers of z
	Integer acc = c_[0];
	Integer zp = 1;
	for (std::size_t i = 1; i < c_.size(); ++i) {
		zp *= z;
		acc = acc * x + c_[i] * zp;
	}
	return acc;
}

BigRationalPoly BinaryFormZ::affine() const
{
	std::vector<Rational> asc;
	asc.reserve(c_.size());
	for (auto it = c_.rbegin(); it != c_.rend(); ++it) asc.emplace_back(*it);
	return BigRationalPoly(std::move(asc));
}

BinaryFormZ BinaryFormZ::from_affine(const BigRationalPoly& f, int d)
{
	if (!f.is_zero() && f.degree() > d) throw ContractError("from_affine: degree exceeds formal degree");
	Integer l = 1;
	for (const auto& q : f.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
	std::vector<Integer> desc(static_cast<std::size_t>(d) + 1, Integer(0));
	for (int i = 0; i <= f.degree() && !f.is_zero(); ++i) {
		const Rational q = f.coeff(i);
		desc[static_cast<std::size_t>(d - i)] = q.get_num() * (l / q.get_den());
	}
	return BinaryFormZ(std::move(desc));
}

BinaryFormZ BinaryFormZ::partial_x() const
{
	const int d = degree();
	if (d == 0) return BinaryFormZ{0};
	std::vector<Integer> r(static_cast<std::size_t>(d));
	for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)] * (d - i);
	return BinaryFormZ(std::move(r));
}

BinaryFormZ BinaryFormZ::partial_z() const
{
	const int d = degree();
	if (d == 0) return BinaryFormZ{0};
	std::vector<Integer> r(static_cast<std::size_t>(d));
	for (int i = 1; i <= d; ++i) r[static_cast<std::size_t>(i - 1)] = c_[static_cast<std::size_t>(i)] * i;
	return BinaryFormZ(std::move(r));
}

std::string BinaryFormZ::to_string() const
{
	std::ostringstream os;
	os << "[";
	for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].get_str();
	os << "]";
	return os.str();
}

Integer determinant(std::vector<Integer> m, std::size_t n)
{
	if (m.size() != n * n) throw ContractError("determinant: matrix is not square");
	if (n == 0) return 1;
	auto at = [&](std::size_t i, std::size_t j) -> Integer& { return m[i * n + j]; };
	Integer prev = 1;
	int sign = 1;
	for (std::size_t k = 0; k + 1 < n; ++k) {
		if (at(k, k) == 0) {
			std::size_t r = k + 1;
			while (r < n && at(r, k) == 0) ++r;
			if (r == n) return 0;
			for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(r, j));
			sign = -sign;
		}
		for (std::size_t i = k + 1; i < n; ++i) {
			for (std::size_t j = k + 1; j < n; ++j) {
				Integer v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
				mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
				at(i, j) = std::move(v);
			}
		}
		prev = at(k, k);
	}
	return sign * at(n - 1, n - 1);
}

Integer sylvester_resultant(std::span<const Integer> a, std::span<const Integer> b)
{
	if (a.empty() || b.empty()) throw ContractError("sylvester_resultant: empty coefficient vector");
	const std::size_t m = a.size() - 1, n = b.size() - 1;
	const std::size_t size = m + n;
	if (size == 0) return 1;
	std::vector<Integer> mat(size * size, Integer(0));
	for (std::size_t r = 0; r < n; ++r)
		for (std::size_t j = 0; j <= m; ++j) mat[r * size + r + j] = a[j];
	for (std::size_t r = 0; r < m; ++r)
		for (std::size_t j = 0; j <= n; ++j) mat[(n + r) * size + r + j] = b[j];
	return determinant(std::move(mat), size);
}

Integer resultant(const BinaryFormZ& f, const BinaryFormZ& g)
{
	if (f.degree() != g.degree()) throw ContractError("resultant: forms of different degree");
	if (f.degree() < 1) throw ContractError("resultant: forms must have degree >= 1");
	return sylvester_resultant(f.coefficients(), g.coefficients());
}

Integer resultant(const BigRationalPoly& f, const BigRationalPoly& g)
{
	if (f.is_zero() || g.is_zero()) throw ContractError("resultant of a zero polynomial");
	auto fi = primitive_integer_coefficients(f);
	auto gi = primitive_integer_coefficients(g);
	std::reverse(fi.begin(), fi.end());
	std::reverse(gi.begin(), gi.end());
	return sylvester_resultant(fi, gi);
}

// ---------------------------------------------------------------------------
// ProjectivePointQ

ProjectivePointQ normalize_point(Integer a, Integer b)
{
	if (a == 0 && b == 0) throw InvalidPointError("(0, 0) is not a point of P^1");
	ProjectivePointQ p;
	if (b == 0) {
		p.a_ = 1;
		p.b_ = 0;
		return p;
	}
	Integer g;
	mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
	if (b < 0) g = -g;
	mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
	mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());
	p.a_ = std::move(a);
	p.b_ = std::move(b);
	return p;
}

ProjectivePointQ normalize_point(const Rational& a, const Rational& b)
{
	Integer l;
	mpz_lcm(l.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
	return normalize_point(Integer(a.get_num() * (l / a.get_den())), Integer(b.get_num() * (l / b.get_den())));
}

std::string ProjectivePointQ::to_string() const { return "[" + a_.get_str() + ":" + b_.get_str() + "]"; }

double weil_height(const ProjectivePointQ& p)
{
	const Integer& m = (abs(p.a()) >= abs(p.b())) ? p.a() : p.b();
	return log_abs(m);
}

std::size_t ProjectivePointHash::operator()(const ProjectivePointQ& p) const noexcept
{
	auto h = [](const Integer& v) -> std::size_t {
		const mpz_srcptr z = v.get_mpz_t();
		std::size_t acc = static_cast<std::size_t>(z->_mp_size) * 0x9e3779b97f4a7c15ull;
		const int n = std::abs(z->_mp_size);
		for (int i = 0; i < n; ++i) acc = (acc ^ z->_mp_d[i]) * 0x100000001b3ull;
		return acc;
	};
	return h(p.a()) ^ (h(p.b()) * 0xff51afd7ed558ccdull);
}

} // namespace orbmod
