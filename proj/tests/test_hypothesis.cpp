#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "orbmod/hypothesis.hpp"

using namespace orbmod;

namespace {

BigRationalPoly poly(std::initializer_list<long> asc) { return BigRationalPoly(asc); }
RationalMapQ poly_map(const BigRationalPoly& f) { return RationalMapQ::polynomial(f); }
BigRationalPoly linear(const Rational& a, const Rational& b) { return BigRationalPoly(std::vector<Rational>{b, a}); }

// D(w) up to scaling: compare monic forms.
BigRationalPoly monic(const BigRationalPoly& f) { return f * BigRationalPoly::constant(Rational(1) / f.leading()); }

RationalMapQ random_map(std::mt19937_64& rng, int d, long h)
{
	for (;;) {
		try {
			return RationalMapQ::ratio(oracle::random_poly(rng, d, h), oracle::random_poly(rng, d, h));
		} catch (const ContractError&) {
		}
	}
}

Rational random_nonzero(std::mt19937_64& rng, long h)
{
	std::uniform_int_distribution<long> c(1, h), sign(0, 1);
	Rational q(c(rng) * (sign(rng) ? 1 : -1), c(rng));
	q.canonicalize();
	return q;
}

} // namespace

TEST_SUITE("hypothesis")
{
	TEST_CASE("critical values of x^2")
	{
		const auto cd = critical_values(poly_map(poly({0, 0, 1})));
		CHECK(cd.degree == 2);
		CHECK(cd.values.degree() == 1);
		CHECK(monic(cd.values) == poly({0, 1}));
		CHECK(cd.infinity_multiplicity == 1);
		CHECK(cd.total_multiplicity() == 2);
		CHECK_FALSE(cd.chart.is_identity());
		CHECK(cd.chart_values.degree() == 2);
	}

	TEST_CASE("critical values of (x^2+1)/(x^2-1)")
	{
		const auto f = RationalMapQ::ratio(poly({1, 0, 1}), poly({-1, 0, 1}));
		const auto cd = critical_values(f);
		CHECK(monic(cd.values) == poly({-1, 0, 1}));
		CHECK_FALSE(cd.infinity_is_critical_value());
		CHECK(cd.chart.is_identity());
		CHECK(is_critically_simple(f));
	}

	TEST_CASE("critical values of T_4")
	{
		const auto t4 = chebyshev(4);
		CHECK(t4 == poly({1, 0, -8, 0, 8}));
		const auto cd = critical_values(poly_map(t4));
		CHECK(monic(cd.values) == poly({-1, 1}) * poly({1, 1}).pow(2));
		CHECK(cd.infinity_multiplicity == 3);
		CHECK(cd.total_multiplicity() == 6);
		REQUIRE(cd.profile.size() == 2);
		CHECK(cd.profile[0].first == poly({-1, 1}));
		CHECK(cd.profile[1] == std::make_pair(poly({1, 1}), 2));
	}

	TEST_CASE("critical simplicity examples")
	{
		CHECK(is_critically_simple(poly_map(poly({1, 0, 1}))));
		for (int n = 3; n <= 6; ++n) CHECK_FALSE(is_critically_simple(poly_map(BigRationalPoly::monomial(1, n))));
		CHECK_FALSE(is_critically_simple(poly_map(chebyshev(4))));
		// polynomials of degree >= 3 are totally ramified over infinity
		CHECK_FALSE(is_critically_simple(poly_map(poly({1, 1, 0, 1}))));
		CHECK_FALSE(is_critically_simple(poly_map(poly({3, -1, 2, 0, 1}))));
		CHECK(is_critically_simple(RationalMapQ::ratio(poly({1, 0, 0, 1}), poly({1, 2}))) ==
		      oracle::fiber_count_simple(RationalMapQ::ratio(poly({1, 0, 0, 1}), poly({1, 2}))));
	}

	TEST_CASE("critical simplicity agrees with fiber counts")
	{
		std::mt19937_64 rng(31);
		int simple = 0, not_simple = 0;
		for (int t = 0; t < 100; ++t) {
			const int d = 2 + t % 4;
			RationalMapQ f = random_map(rng, d, 5);
			switch (t % 5) {
			case 1: // polynomial
				f = poly_map(oracle::random_poly(rng, d, 5));
				break;
			case 2: { // composite: critical values collide generically
				if (d == 4) {
					const auto inner = random_map(rng, 2, 4);
					const auto outer = random_map(rng, 2, 4);
					f = outer.compose(inner);
				}
				break;
			}
			case 3: // even map: x and -x share every fiber
				for (bool done = false; !done;) {
					try {
						f = RationalMapQ::ratio(oracle::random_poly(rng, 2, 5).compose(poly({0, 0, 1})),
						                        oracle::random_poly(rng, 2, 5).compose(poly({0, 0, 1})));
						done = true;
					} catch (const ContractError&) {
					}
				}
				break;
			default:
				break;
			}
			const bool got = is_critically_simple(f);
			CAPTURE(f.to_string());
			CHECK(got == oracle::fiber_count_simple(f));
			const auto cd = critical_values(f);
			CHECK(cd.total_multiplicity() == 2 * f.degree() - 2);
			CHECK(cd.chart_values.degree() == 2 * f.degree() - 2);
			CHECK(got == oracle::form_squarefree(cd.chart_values, 2 * f.degree() - 2));
			(got ? simple : not_simple)++;
		}
		CHECK(simple > 20);
		CHECK(not_simple > 20);
	}

	TEST_CASE("critical separation")
	{
		const auto f = RationalMapQ::ratio(poly({1, 0, 1}), poly({-1, 0, 1}));
		const auto g = RationalMapQ::ratio(poly({0, 0, 2}), poly({1, 0, 1})); // values 0 and 2
		CHECK(are_critically_separated(f, g));
		CHECK_FALSE(are_critically_separated(f, f));
		// two polynomials share the critical value infinity
		CHECK_FALSE(are_critically_separated(poly_map(poly({1, 0, 1})), poly_map(poly({-1, 0, 1}))));
		// shared finite value -1
		const auto h = RationalMapQ::ratio(poly({-3, 0, 1}), poly({3, 0, 1}));
		CHECK_FALSE(are_critically_separated(f, h));

		std::mt19937_64 rng(32);
		for (int t = 0; t < 20; ++t) {
			const auto a = random_map(rng, 2 + t % 3, 4), b = random_map(rng, 2 + t % 2, 4);
			CHECK(are_critically_separated(a, b) == are_critically_separated(b, a));
		}
	}

	TEST_CASE("scaled Chebyshev polynomials")
	{
		CHECK(chebyshev(0) == poly({1}));
		CHECK(chebyshev(5) == poly({0, 5, 0, -20, 0, 16}));
		CHECK(scaled_chebyshev(3, 1) == chebyshev(3));
		// lambda^-3 T_3(lambda x) = 4x^3 - 3x / lambda^2
		CHECK(scaled_chebyshev(3, 4) == BigRationalPoly(std::vector<Rational>{0, Rational(-3, 4), 0, 4}));
		CHECK_THROWS_AS(scaled_chebyshev(3, 0), ContractError);
	}

	TEST_CASE("right decomposition")
	{
		const auto f = poly({1, 0, 1}).compose(poly({0, 1, 1}));
		const auto rd = right_decompose(f, 2);
		REQUIRE(rd);
		CHECK(rd->inner == poly({0, 1, 1}));
		CHECK(rd->outer == poly({1, 0, 1}));
		CHECK_FALSE(right_decompose(poly({0, 1, 0, 0, 1}), 2));
		CHECK_THROWS_AS(right_decompose(poly({0, 1, 0, 1}), 2), ContractError);
	}

	TEST_CASE("power-like examples")
	{
		for (int n = 2; n <= 7; ++n) {
			const auto v = is_power_like(BigRationalPoly::monomial(1, n));
			CHECK(v.is_power_like);
			CHECK(is_power_like(chebyshev(n)).is_power_like);
		}
		// every quadratic
		CHECK(is_power_like(poly({7, -3, 2})).is_power_like);
		CHECK_FALSE(is_power_like(poly({0, 1, 0, 0, 1})).is_power_like);
		CHECK_FALSE(is_power_like(poly({0, 1, 0, 0, 0, 1})).is_power_like);
		// a depressed cubic x^3 + px is a scaled T_3, so every cubic qualifies
		const auto cubic = is_power_like(poly({1, 1, 0, 1}));
		REQUIRE(cubic.witness);
		CHECK(cubic.witness->kind == InnerKind::chebyshev);
		CHECK(cubic.witness->lambda_sq == Rational(-3, 4));
		const auto t = is_power_like(chebyshev(4));
		REQUIRE(t.witness);
		CHECK(t.witness->recompose() == chebyshev(4));
		CHECK_FALSE(t.witness->to_string().empty());
		CHECK_THROWS_AS(is_power_like(poly({1, 1})), ContractError);
	}

	TEST_CASE("constructed power-like polynomials are recognized")
	{
		std::mt19937_64 rng(33);
		for (int t = 0; t < 60; ++t) {
			const int n = 2 + t % 4;
			const int outer_deg = 1 + (t / 4) % 2;
			const auto R = oracle::random_poly(rng, outer_deg, 6);
			const Rational a = random_nonzero(rng, 5), b = random_nonzero(rng, 5);
			const BigRationalPoly core = (t % 2 == 0 || n == 2) ? BigRationalPoly::monomial(1, n) : chebyshev(n);
			const auto f = R.compose(core.compose(linear(a, b)));
			const auto v = is_power_like(f);
			CAPTURE(t);
			REQUIRE(v.is_power_like);
			REQUIRE(v.witness);
			CHECK(v.witness->recompose() == f);
		}
	}

	TEST_CASE("power-like witness with irrational scaling")
	{
		// T_3(sqrt(2) x) / (2 sqrt 2) = 4x^3 - 3x/2 has lambda^2 = 2
		const auto f = scaled_chebyshev(3, 2);
		const auto v = is_power_like(f * poly({3}) + poly({1}));
		REQUIRE(v.witness);
		CHECK(v.witness->kind == InnerKind::chebyshev);
		CHECK(v.witness->recompose() == f * poly({3}) + poly({1}));
	}

	TEST_CASE("left compositional factors")
	{
		const auto f2 = poly({1, 0, 1}), g = poly({0, 1, 1});
		const auto f1 = f2.compose(g);
		const auto lf = left_compositional_factor(f1, f2);
		REQUIRE(lf);
		REQUIRE(lf->rational_g);
		CHECK(f2.compose(*lf->rational_g) == f1);
		CHECK_FALSE(left_compositional_factor(poly({0, 1, 0, 0, 1}), f2));
		CHECK_FALSE(left_compositional_factor(poly({0, 1, 0, 1}), f2));
		CHECK_FALSE(left_compositional_factor(f2, f1));
		// degree 1 factors are excluded
		CHECK_FALSE(left_compositional_factor(f2.compose(poly({3, 2})), f2));

		const auto irr = left_compositional_factor(poly({0, 0, 0, 0, 2}), poly({0, 0, 1}));
		REQUIRE(irr);
		CHECK(irr->alpha_poly == poly({-2, 0, 1}));
		CHECK_FALSE(irr->rational_g);
	}

	TEST_CASE("random composites have left factors")
	{
		std::mt19937_64 rng(34);
		for (int t = 0; t < 30; ++t) {
			const auto f2 = oracle::random_poly(rng, 2 + t % 3, 6);
			const auto g = oracle::random_poly(rng, 2 + t % 2, 6);
			const auto f1 = f2.compose(g);
			const auto lf = left_compositional_factor(f1, f2);
			REQUIRE(lf);
			REQUIRE(lf->rational_g);
			CHECK(f2.compose(*lf->rational_g) == f1);
		}
	}

	TEST_CASE("finite freeness check")
	{
		const SemigroupSystem mono({poly_map(poly({0, 0, 1})), poly_map(poly({0, 0, 0, 1}))});
		const auto r = free_semigroup_finite_check(mono, 2);
		REQUIRE(r.equal_words);
		CHECK(r.equal_words->first == Word{{1, 2}});
		CHECK(r.equal_words->second == Word{{2, 1}});
		const SemigroupSystem running({poly_map(poly({1, 0, 1})), poly_map(poly({-1, 0, 1}))});
		const auto d = free_semigroup_finite_check(running, 3);
		CHECK(d.distinct());
		CHECK(d.words_checked == 14);
		CHECK_THROWS_AS(free_semigroup_finite_check(running, 13), BudgetExceeded);
	}

	TEST_CASE("sampler finds a critically simple and separated pair")
	{
		const auto rep = sample_good_family({4, 4}, 500, 10, 1);
		REQUIRE(rep.system);
		CHECK(rep.used_attempts >= 1);
		CHECK(rep.used_attempts <= 500);
		const auto& f = rep.system->map(1);
		const auto& g = rep.system->map(2);
		CHECK(f.degree() == 4);
		CHECK(is_critically_simple(f));
		CHECK(is_critically_simple(g));
		CHECK(are_critically_separated(f, g));
		CHECK(oracle::fiber_count_simple(f));
		CHECK(oracle::fiber_count_simple(g));
		CHECK(f.max_abs_coefficient() <= 10);
		// reproducible
		CHECK(sample_good_family({4, 4}, 500, 10, 1).system->canonical_string() == rep.system->canonical_string());
		CHECK_THROWS_AS(sample_good_family({3, 4}, 10, 10), ContractError);
		CHECK_THROWS_AS(sample_good_family({4}, 10, 10), ContractError);
	}

	TEST_CASE("genus constants")
	{
		const auto g = genus_constants(4, 4);
		CHECK(g.diag == 4);
		CHECK(g.cross == 9);
		CHECK(g.both_at_least_two());
		CHECK(genus_constants(3, 5).diag == 1);
		CHECK_FALSE(genus_constants(3, 5).both_at_least_two());
		CHECK_THROWS_AS(genus_constants(1, 4), ContractError);
	}

	TEST_CASE("verify routes")
	{
		const SemigroupSystem running({poly_map(poly({1, 0, 1})), poly_map(poly({-1, 0, 1}))});
		const auto none = verify_system(running, affine_point(0), 3);
		CHECK(none.route == "none");
		REQUIRE(none.maps.size() == 2);
		CHECK(none.maps[0].power_like->is_power_like);
		CHECK(none.freeness);

		const SemigroupSystem polys({poly_map(poly({0, 1, 0, 0, 1})), poly_map(poly({0, 1, 0, 0, 0, 1}))});
		const auto pv = verify_system(polys, affine_point(1), 2);
		CHECK(pv.route == "poly");
		REQUIRE(pv.pairs.size() == 1);
		CHECK(pv.pairs[0].both_polynomial);
		CHECK_FALSE(pv.pairs[0].critically_separated);

		const auto rep = sample_good_family({4, 4}, 500, 10, 1);
		REQUIRE(rep.system);
		const auto rv = verify_system(*rep.system, affine_point(0), 2);
		CHECK(rv.route == "ratmaps");
		CHECK(rv.pairs[0].ratmaps_route);
	}
}
