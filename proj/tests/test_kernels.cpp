#include "doctest.h"

#include <random>
#include <vector>

#include "orbmod/kernels.hpp"

using namespace orbmod::kernels;

namespace {

std::vector<std::uint32_t> residues(std::mt19937_64& rng, std::size_t n, std::uint32_t p, double zero_rate = 0.0)
{
	std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
	std::bernoulli_distribution zero(zero_rate);
	std::vector<std::uint32_t> v(n);
	for (auto& x : v) x = zero(rng) ? 0 : d(rng);
	return v;
}

// primes spread over the AVX2 range, including its upper edge
const std::uint32_t kPrimes[] = {2, 3, 5, 7, 13, 251, 65521, 999983, 16777213, 67108859};

std::uint64_t slow_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p)
{
	std::uint64_t r = 1;
	for (; e; e >>= 1, a = a * a % p)
		if (e & 1) r = r * a % p;
	return r;
}

} // namespace

TEST_SUITE("kernels")
{
	TEST_CASE("inverse_mod matches Fermat inverses")
	{
		std::mt19937_64 rng(1);
		for (std::uint32_t p : {3u, 65521u, 999983u, 4294967291u}) {
			std::uniform_int_distribution<std::uint32_t> d(1, p - 1);
			for (int t = 0; t < 200; ++t) {
				const std::uint32_t a = d(rng);
				CHECK(inverse_mod(a, p) == slow_pow(a, p - 2, p));
				CHECK(mul_mod(a, inverse_mod(a, p), p) == 1);
			}
		}
	}

	TEST_CASE("scalar horner against direct power sums")
	{
		const std::uint32_t p = 4294967291u; // largest 32-bit prime stresses 64-bit intermediates
		std::mt19937_64 rng(2);
		for (int t = 0; t < 50; ++t) {
			const auto c = residues(rng, 1 + t % 7, p);
			const auto xs = residues(rng, 9, p);
			std::vector<std::uint32_t> out(xs.size());
			horner_scalar(c, xs, p, out);
			for (std::size_t i = 0; i < xs.size(); ++i) {
				std::uint64_t acc = 0;
				for (std::size_t j = 0; j < c.size(); ++j)
					acc = (acc + c[j] * slow_pow(xs[i], c.size() - 1 - j, p) % p) % p;
				CHECK(out[i] == acc);
			}
		}
	}

	TEST_CASE("kernel selection")
	{
		CHECK(select_kernels(101, Isa::scalar).isa == Isa::scalar);
		CHECK(select_kernels(kAvx2ModulusLimit + 15, Isa::avx2).isa == Isa::scalar);
		if (cpu_has_avx2() && ORBMOD_HAVE_AVX2_KERNELS) CHECK(select_kernels(101).isa == Isa::avx2);
		CHECK(std::string(isa_name(Isa::avx2)) == "avx2");
	}

#if ORBMOD_HAVE_AVX2_KERNELS
	TEST_CASE("AVX2 horner equals scalar")
	{
		if (!cpu_has_avx2()) return;
		std::mt19937_64 rng(3);
		for (std::uint32_t p : kPrimes) {
			for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 64u, 1000u}) {
				for (std::size_t nc : {1u, 2u, 3u, 5u, 33u, 40u}) {
					const auto c = residues(rng, nc, p);
					const auto xs = residues(rng, n, p);
					std::vector<std::uint32_t> a(n), b(n);
					horner_scalar(c, xs, p, a);
					horner_avx2(c, xs, p, b);
					CHECK(a == b);
					// in-place use
					auto inplace = xs;
					horner_avx2(c, inplace, p, inplace);
					CHECK(inplace == a);
				}
			}
		}
	}

	TEST_CASE("AVX2 mulmod equals scalar, including extreme residues")
	{
		if (!cpu_has_avx2()) return;
		std::mt19937_64 rng(4);
		for (std::uint32_t p : kPrimes) {
			for (std::size_t n : {0u, 1u, 5u, 16u, 1023u}) {
				auto a = residues(rng, n, p), b = residues(rng, n, p);
				if (n > 2) {
					a[0] = b[0] = p - 1;
					a[1] = p - 1;
					b[1] = 1;
				}
				std::vector<std::uint32_t> x(n), y(n);
				mulmod_scalar(a, b, p, x);
				mulmod_avx2(a, b, p, y);
				CHECK(x == y);
			}
		}
	}

	TEST_CASE("AVX2 batch inversion equals scalar with zeros interspersed")
	{
		if (!cpu_has_avx2()) return;
		std::mt19937_64 rng(5);
		for (std::uint32_t p : kPrimes) {
			for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 100u, 4096u}) {
				for (double zr : {0.0, 0.3, 1.0}) {
					const auto v = residues(rng, n, p, zr);
					auto a = v, b = v;
					std::vector<std::uint32_t> s1(n + 4), s2(n + 4);
					batch_invert_scalar(a, p, s1);
					batch_invert_avx2(b, p, s2);
					CHECK(a == b);
					for (std::size_t i = 0; i < n; ++i) {
						if (v[i] == 0)
							CHECK(a[i] == 0);
						else
							CHECK(mul_mod(a[i], v[i], p) == 1);
					}
				}
			}
		}
	}
#endif
}
