// AVX2 variants of the F_p batch kernels. Built with -mavx2; only reached through
// select_kernels() after a runtime CPU check.
//
// Residues are carried as doubles. For p < 2^26 every product of two residues is an exact
// integer below 2^52, so a*b - floor(a*b/p)*p is computed without rounding error; the
// quotient estimate can be off by one and is corrected with two compare/blend steps.

#include "orbmod/kernels.hpp"

#include <immintrin.h>

#include <array>

namespace orbmod::kernels {

namespace {

struct Modulus {
	__m256d p, pinv, zero;
	explicit Modulus(std::uint32_t m)
		: p(_mm256_set1_pd(static_cast<double>(m))), pinv(_mm256_set1_pd(1.0 / static_cast<double>(m))),
		  zero(_mm256_setzero_pd())
	{
	}
};

inline __m256d reduce_once(__m256d r, const Modulus& m)
{
	r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, m.zero, _CMP_LT_OQ), m.p));
	return _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, m.p, _CMP_GE_OQ), m.p));
}

inline __m256d mulmod_pd(__m256d a, __m256d b, const Modulus& m)
{
	const __m256d prod = _mm256_mul_pd(a, b);
	const __m256d q = _mm256_floor_pd(_mm256_mul_pd(prod, m.pinv));
	return reduce_once(_mm256_sub_pd(prod, _mm256_mul_pd(q, m.p)), m);
}

inline __m256d load4(const std::uint32_t* src)
{
	return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src)));
}

inline void store4(std::uint32_t* dst, __m256d v)
{
	_mm_storeu_si128(reinterpret_cast<__m128i*>(dst), _mm256_cvttpd_epi32(v));
}

} // namespace

void horner_avx2(std::span<const std::uint32_t> coeffs, std::span<const std::uint32_t> xs, std::uint32_t p,
                 std::span<std::uint32_t> out)
{
	const Modulus m(p);
	const std::size_t n = xs.size();
	const std::size_t nc = coeffs.size();
	alignas(32) __m256d cvec[32];
	const bool cached = nc <= 32;
	if (cached)
		for (std::size_t j = 0; j < nc; ++j) cvec[j] = _mm256_set1_pd(static_cast<double>(coeffs[j]));
	auto coeff = [&](std::size_t j) { return cached ? cvec[j] : _mm256_set1_pd(static_cast<double>(coeffs[j])); };

	std::size_t i = 0;
	// two independent chains per iteration to hide the multiply latency
	for (; i + 8 <= n; i += 8) {
		const __m256d x0 = load4(xs.data() + i), x1 = load4(xs.data() + i + 4);
		__m256d a0 = coeff(0), a1 = a0;
		for (std::size_t j = 1; j < nc; ++j) {
			const __m256d c = coeff(j);
			a0 = _mm256_add_pd(mulmod_pd(a0, x0, m), c);
			a1 = _mm256_add_pd(mulmod_pd(a1, x1, m), c);
			a0 = _mm256_sub_pd(a0, _mm256_and_pd(_mm256_cmp_pd(a0, m.p, _CMP_GE_OQ), m.p));
			a1 = _mm256_sub_pd(a1, _mm256_and_pd(_mm256_cmp_pd(a1, m.p, _CMP_GE_OQ), m.p));
		}
		store4(out.data() + i, a0);
		store4(out.data() + i + 4, a1);
	}
	for (; i + 4 <= n; i += 4) {
		const __m256d x = load4(xs.data() + i);
		__m256d a = coeff(0);
		for (std::size_t j = 1; j < nc; ++j) {
			a = _mm256_add_pd(mulmod_pd(a, x, m), coeff(j));
			a = _mm256_sub_pd(a, _mm256_and_pd(_mm256_cmp_pd(a, m.p, _CMP_GE_OQ), m.p));
		}
		store4(out.data() + i, a);
	}
	if (i < n) horner_scalar(coeffs, xs.subspan(i), p, out.subspan(i));
}

void mulmod_avx2(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::uint32_t p,
                 std::span<std::uint32_t> out)
{
	const Modulus m(p);
	const std::size_t n = a.size();
	std::size_t i = 0;
	for (; i + 4 <= n; i += 4) store4(out.data() + i, mulmod_pd(load4(a.data() + i), load4(b.data() + i), m));
	if (i < n) mulmod_scalar(a.subspan(i), b.subspan(i), p, out.subspan(i));
}

void batch_invert_avx2(std::span<std::uint32_t> v, std::uint32_t p, std::span<std::uint32_t> scratch)
{
	// Four interleaved Montgomery chains: lane l of group t holds v[4t + l].
	const Modulus m(p);
	const std::size_t groups = v.size() / 4;
	const __m256d one = _mm256_set1_pd(1.0);
	auto load_nonzero = [&](std::size_t t, __m256d& zero_mask) {
		const __m256d x = load4(v.data() + 4 * t);
		zero_mask = _mm256_cmp_pd(x, m.zero, _CMP_EQ_OQ);
		return _mm256_blendv_pd(x, one, zero_mask);
	};

	__m256d acc = one;
	for (std::size_t t = 0; t < groups; ++t) {
		store4(scratch.data() + 4 * t, acc);
		__m256d zm;
		acc = mulmod_pd(acc, load_nonzero(t, zm), m);
	}
	if (groups > 0) {
		alignas(16) std::array<std::uint32_t, 4> lanes{};
		store4(lanes.data(), acc);
		for (auto& l : lanes) l = inverse_mod(l, p);
		__m256d inv = load4(lanes.data());
		for (std::size_t t = groups; t-- > 0;) {
			__m256d zm;
			const __m256d x = load_nonzero(t, zm);
			const __m256d res = mulmod_pd(inv, load4(scratch.data() + 4 * t), m);
			inv = mulmod_pd(inv, x, m);
			store4(v.data() + 4 * t, _mm256_blendv_pd(res, m.zero, zm));
		}
	}
	const std::size_t done = groups * 4;
	if (done < v.size()) batch_invert_scalar(v.subspan(done), p, scratch.subspan(done));
}

} // namespace orbmod::kernels
