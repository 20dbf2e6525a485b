#include "orbmod/kernels.hpp"

namespace orbmod::kernels {

bool cpu_has_avx2() noexcept
{
#if ORBMOD_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
	return __builtin_cpu_supports("avx2");
#else
	return false;
#endif
}

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) noexcept
{
	// extended Euclid on signed 64-bit; a != 0 mod p assumed
	std::int64_t r0 = p, r1 = a % p, s0 = 0, s1 = 1;
	while (r1 != 0) {
		const std::int64_t q = r0 / r1;
		const std::int64_t r2 = r0 - q * r1;
		r0 = r1;
		r1 = r2;
		const std::int64_t s2 = s0 - q * s1;
		s0 = s1;
		s1 = s2;
	}
	if (s0 < 0) s0 += p;
	return static_cast<std::uint32_t>(s0);
}

void horner_scalar(std::span<const std::uint32_t> coeffs, std::span<const std::uint32_t> xs, std::uint32_t p,
                   std::span<std::uint32_t> out)
{
	for (std::size_t i = 0; i < xs.size(); ++i) {
		const std::uint64_t x = xs[i];
		std::uint64_t acc = coeffs[0];
		for (std::size_t j = 1; j < coeffs.size(); ++j) acc = (acc * x + coeffs[j]) % p;
		out[i] = static_cast<std::uint32_t>(acc);
	}
}

void mulmod_scalar(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::uint32_t p,
                   std::span<std::uint32_t> out)
{
	for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul_mod(a[i], b[i], p);
}

void batch_invert_scalar(std::span<std::uint32_t> v, std::uint32_t p, std::span<std::uint32_t> scratch)
{
	// Montgomery's trick: prefix products, one inversion, backward sweep.
	const std::size_t n = v.size();
	if (n == 0) return;
	std::uint32_t acc = 1;
	for (std::size_t i = 0; i < n; ++i) {
		scratch[i] = acc;
		if (v[i] != 0) acc = mul_mod(acc, v[i], p);
	}
	std::uint32_t inv = inverse_mod(acc, p);
	for (std::size_t i = n; i-- > 0;) {
		if (v[i] == 0) continue;
		const std::uint32_t vi = v[i];
		v[i] = mul_mod(inv, scratch[i], p);
		inv = mul_mod(inv, vi, p);
	}
}

KernelSet scalar_kernels() noexcept { return {Isa::scalar, &horner_scalar, &mulmod_scalar, &batch_invert_scalar}; }

KernelSet select_kernels(std::uint32_t p, Isa ceiling) noexcept
{
#if ORBMOD_HAVE_AVX2_KERNELS
	if (ceiling == Isa::avx2 && p < kAvx2ModulusLimit && cpu_has_avx2())
		return {Isa::avx2, &horner_avx2, &mulmod_avx2, &batch_invert_avx2};
#else
	(void)p;
	(void)ceiling;
#endif
	return scalar_kernels();
}

} // namespace orbmod::kernels
