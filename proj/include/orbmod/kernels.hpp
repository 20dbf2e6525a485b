#pragma once
// Batched arithmetic in F_p over spans of residues: the inner loops of the orbit BFS.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2 variant
// (4 lanes of exact double arithmetic). The AVX2 path requires p < 2^26 so that all
// products of two residues are exact in a double. Variants are selected at runtime.

#include <cstdint>
#include <span>

namespace orbmod::kernels {

enum class Isa { scalar, avx2 };

// Largest modulus (exclusive) accepted by the AVX2 kernels.
inline constexpr std::uint32_t kAvx2ModulusLimit = 1u << 26;

bool cpu_has_avx2() noexcept;
const char* isa_name(Isa isa) noexcept;

// out[i] = c[0] x^n + c[1] x^{n-1} + ... + c[n] at x = xs[i], all mod p.
// Coefficients and inputs must already be reduced (< p). out may alias xs.
using HornerFn = void (*)(std::span<const std::uint32_t> coeffs, std::span<const std::uint32_t> xs, std::uint32_t p,
                          std::span<std::uint32_t> out);

// out[i] = a[i] * b[i] mod p. out may alias a or b.
using MulmodFn = void (*)(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::uint32_t p,
                          std::span<std::uint32_t> out);

// In place: v[i] <- v[i]^{-1} mod p for nonzero v[i]; zeros stay zero.
// scratch.size() >= v.size() + 4.
using BatchInvertFn = void (*)(std::span<std::uint32_t> v, std::uint32_t p, std::span<std::uint32_t> scratch);

struct KernelSet {
	Isa isa;
	HornerFn horner;
	MulmodFn mulmod;
	BatchInvertFn batch_invert;
};

void horner_scalar(std::span<const std::uint32_t> coeffs, std::span<const std::uint32_t> xs, std::uint32_t p,
                   std::span<std::uint32_t> out);
void mulmod_scalar(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::uint32_t p,
                   std::span<std::uint32_t> out);
void batch_invert_scalar(std::span<std::uint32_t> v, std::uint32_t p, std::span<std::uint32_t> scratch);

#if defined(__x86_64__) || defined(_M_X64)
#define ORBMOD_HAVE_AVX2_KERNELS 1
void horner_avx2(std::span<const std::uint32_t> coeffs, std::span<const std::uint32_t> xs, std::uint32_t p,
                 std::span<std::uint32_t> out);
void mulmod_avx2(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::uint32_t p,
                 std::span<std::uint32_t> out);
void batch_invert_avx2(std::span<std::uint32_t> v, std::uint32_t p, std::span<std::uint32_t> scratch);
#else
#define ORBMOD_HAVE_AVX2_KERNELS 0
#endif

KernelSet scalar_kernels() noexcept;

// Best kernels for modulus p, never above `ceiling`. Falls back to scalar when the CPU lacks
// AVX2 or p >= kAvx2ModulusLimit.
KernelSet select_kernels(std::uint32_t p, Isa ceiling = Isa::avx2) noexcept;

// Scalar helpers shared by both variants.
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) noexcept;
inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept
{
	return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

} // namespace orbmod::kernels
