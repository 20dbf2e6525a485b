#include "orbmod/primes.hpp"

#include <algorithm>
#include <cmath>

namespace orbmod {

namespace {

std::vector<std::uint64_t> simple_sieve(std::uint64_t n)
{
	std::vector<bool> composite(n + 1, false);
	std::vector<std::uint64_t> out;
	for (std::uint64_t i = 2; i <= n; ++i) {
		if (composite[i]) continue;
		out.push_back(i);
		for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
	}
	return out;
}

} // namespace

PrimeSieve::PrimeSieve(std::uint64_t limit, std::uint64_t segment_size)
	: limit_(limit), segment_size_(segment_size ? segment_size : 1)
{
	std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
	while (root * root > limit) --root;
	while ((root + 1) * (root + 1) <= limit) ++root;
	base_ = simple_sieve(root);
}

std::vector<std::uint64_t> PrimeSieve::next_segment()
{
	std::vector<std::uint64_t> out;
	while (out.empty() && low_ <= limit_) {
		const std::uint64_t high = std::min(limit_, low_ + segment_size_ - 1);
		std::vector<bool> composite(high - low_ + 1, false);
		for (std::uint64_t q : base_) {
			if (q * q > high) break;
			std::uint64_t start = std::max(q * q, ((low_ + q - 1) / q) * q);
			for (std::uint64_t j = start; j <= high; j += q) composite[j - low_] = true;
		}
		for (std::uint64_t v = std::max<std::uint64_t>(low_, 2); v <= high; ++v)
			if (!composite[v - low_]) out.push_back(v);
		low_ = high + 1;
		if (high == limit_) low_ = limit_ + 1;
	}
	return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
	std::vector<std::uint64_t> all;
	if (limit < 2) return all;
	PrimeSieve sieve(limit);
	for (auto seg = sieve.next_segment(); !seg.empty(); seg = sieve.next_segment())
		all.insert(all.end(), seg.begin(), seg.end());
	return all;
}

} // namespace orbmod
