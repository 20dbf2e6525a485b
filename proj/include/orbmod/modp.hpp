#pragma once
// Reduction of a system modulo p and the size of the reduced semigroup orbit in P^1(F_p).

#include <cstdint>
#include <optional>
#include <vector>

#include "orbmod/dynamics.hpp"
#include "orbmod/kernels.hpp"

namespace orbmod {

/// One prime's result. m == nullopt encodes m_p = infinity (some map has bad reduction).
struct OrbitRecord {
	std::uint64_t p = 0;
	bool good_reduction = false;
	std::optional<std::uint64_t> m;
	bool visited_cap_hit = false;
	double wall_ms = 0.0;

	bool is_infinite() const noexcept { return !m.has_value(); }
	friend bool operator==(const OrbitRecord& a, const OrbitRecord& b)
	{
		return a.p == b.p && a.good_reduction == b.good_reduction && a.m == b.m && a.visited_cap_hit == b.visited_cap_hit;
	}
};

// p does not divide Res(F, G): the reduced forms still define a degree-d morphism over F_p.
bool good_reduction(const RationalMapQ& f, std::uint64_t p);

// Largest prime the engine accepts (points are stored as 32-bit residues with p meaning infinity).
inline constexpr std::uint64_t kMaxPrime = 4294967291ull;

// Residue of a normalized point: a/b mod p, or p for the point at infinity.
std::uint32_t reduce_point(const ProjectivePointQ& pt, std::uint32_t p);

/// The system and base point reduced mod a good prime p. Residue p stands for [1:0].
class ReducedSystem {
public:
	struct Map {
		std::vector<std::uint32_t> num, den; // descending, reduced mod p
		bool den_constant = false;           // den = c Z^d; num is then pre-scaled by c^{-1}
		std::uint32_t num_lead = 0, den_lead = 0;
	};

	// nullopt when some map has bad reduction at p.
	static std::optional<ReducedSystem> reduce(const SemigroupSystem& s, const ProjectivePointQ& pt, std::uint32_t p);

	std::uint32_t p() const noexcept { return p_; }
	std::uint32_t point() const noexcept { return point_; }
	const std::vector<Map>& maps() const noexcept { return maps_; }

	// Image of residue x (x == p for infinity) under map i (0-based).
	std::uint32_t apply(std::size_t i, std::uint32_t x) const;

private:
	std::uint32_t p_ = 0, point_ = 0;
	std::vector<Map> maps_;
};

struct OrbitOptions {
	kernels::Isa isa = kernels::Isa::avx2;              // ceiling; scalar forces the reference kernels
	std::uint64_t bitset_threshold = std::uint64_t{1} << 25; // bitset visited set below, hash set above
	std::size_t chunk = 4096;                           // frontier batch size
};

// Size of the closure of {point} under all reduced maps.
std::uint64_t reduced_orbit_size(const ReducedSystem& rs, const OrbitOptions& opt = {});

OrbitRecord orbit_size_mod_p(const SemigroupSystem& s, const ProjectivePointQ& pt, std::uint64_t p,
                             const OrbitOptions& opt = {});

} // namespace orbmod
