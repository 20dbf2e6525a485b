#pragma once
// Prime sweeps with an append-only JSONL cache.
//
// Cache line format (one record per line):
//   {"key":"<16 hex>","p":5,"good":true,"m":5,"t_ms":0.01}
// "m" is the string "inf" for bad-reduction primes. The key is a content hash of the
// normalized system and base point, so one file can hold sweeps of several systems.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbmod/modp.hpp"

namespace orbmod {

// FNV-1a 64 of the canonical system text and point, as 16 lowercase hex digits.
std::string system_key(const SemigroupSystem& s, const ProjectivePointQ& pt);

std::string encode_record(std::string_view key, const OrbitRecord& rec);

struct DecodedRecord {
	std::string key;
	OrbitRecord record;
};
// Throws std::runtime_error describing the first problem.
DecodedRecord decode_record(std::string_view line);

class OrbitCache {
public:
	explicit OrbitCache(std::filesystem::path path) : path_(std::move(path)) {}

	const std::filesystem::path& path() const noexcept { return path_; }

	// Validates every line of the file and returns the records carrying `key`, by prime.
	// A missing file is an empty cache. Throws CacheIntegrityError naming the bad line.
	std::map<std::uint64_t, OrbitRecord> load(std::string_view key) const;

	void append(std::string_view key, const std::vector<OrbitRecord>& records) const;

private:
	std::filesystem::path path_;
};

struct SweepOptions {
	std::uint64_t prime_bound = 100;
	std::optional<std::filesystem::path> cache_path;
	unsigned workers = 1;
	std::size_t block = 64; // primes per work unit
	OrbitOptions orbit;
	const std::atomic<bool>* cancel = nullptr;
};

struct SweepSummary {
	std::size_t primes = 0;
	std::size_t cache_hits = 0;
	std::size_t computed = 0;
	bool interrupted = false;
};

// Emits one record per prime p <= prime_bound in ascending order. Cached records are served
// as-is; the rest are computed by `workers` threads and appended to the cache in ascending
// order by the calling thread. On cancellation the cache holds a valid prefix.
SweepSummary sweep(const SemigroupSystem& s, const ProjectivePointQ& pt, const SweepOptions& opt,
                   const std::function<void(const OrbitRecord&)>& sink);

std::vector<OrbitRecord> sweep_records(const SemigroupSystem& s, const ProjectivePointQ& pt, const SweepOptions& opt,
                                       SweepSummary* summary = nullptr);

} // namespace orbmod
