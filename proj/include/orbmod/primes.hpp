#pragma once

#include <cstdint>
#include <vector>

namespace orbmod {

/// Segmented sieve of Eratosthenes producing primes in ascending order, one window at a time.
class PrimeSieve {
public:
	explicit PrimeSieve(std::uint64_t limit, std::uint64_t segment_size = 1u << 18);

	// Next window of primes (ascending); empty once the limit is passed.
	std::vector<std::uint64_t> next_segment();

private:
	std::uint64_t limit_, segment_size_, low_ = 0;
	std::vector<std::uint64_t> base_;
};

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

} // namespace orbmod
