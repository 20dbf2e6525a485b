#include "orbmod/sweep.hpp"

#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "orbmod/primes.hpp"

namespace orbmod {

std::string system_key(const SemigroupSystem& s, const ProjectivePointQ& pt)
{
	const std::string text = s.canonical_string() + "|" + pt.to_string();
	std::uint64_t h = 0xcbf29ce484222325ull;
	for (unsigned char c : text) {
		h ^= c;
		h *= 0x100000001b3ull;
	}
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

std::string encode_record(std::string_view key, const OrbitRecord& rec)
{
	nlohmann::ordered_json j;
	j["key"] = key;
	j["p"] = rec.p;
	j["good"] = rec.good_reduction;
	if (rec.m)
		j["m"] = *rec.m;
	else
		j["m"] = "inf";
	j["t_ms"] = rec.wall_ms;
	return j.dump();
}

DecodedRecord decode_record(std::string_view line)
{
	const auto j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
	if (j.is_discarded() || !j.is_object()) throw std::runtime_error("not a JSON object");
	auto need = [&](const char* k) -> const nlohmann::json& {
		auto it = j.find(k);
		if (it == j.end()) throw std::runtime_error(std::string("missing field '") + k + "'");
		return *it;
	};
	DecodedRecord out;
	const auto& key = need("key");
	const auto& p = need("p");
	const auto& good = need("good");
	const auto& m = need("m");
	if (!key.is_string()) throw std::runtime_error("'key' must be a string");
	if (!p.is_number_unsigned() || p.get<std::uint64_t>() < 2) throw std::runtime_error("'p' must be an integer >= 2");
	if (!good.is_boolean()) throw std::runtime_error("'good' must be a boolean");
	out.key = key.get<std::string>();
	out.record.p = p.get<std::uint64_t>();
	out.record.good_reduction = good.get<bool>();
	if (m.is_string()) {
		if (m.get<std::string>() != "inf") throw std::runtime_error("'m' must be a positive integer or \"inf\"");
		if (out.record.good_reduction) throw std::runtime_error("good-reduction record with m = inf");
	} else if (m.is_number_unsigned()) {
		const auto v = m.get<std::uint64_t>();
		if (!out.record.good_reduction) throw std::runtime_error("bad-reduction record must have m = \"inf\"");
		if (v < 1 || v > out.record.p + 1) throw std::runtime_error("'m' outside 1..p+1");
		out.record.m = v;
	} else {
		throw std::runtime_error("'m' must be a positive integer or \"inf\"");
	}
	if (auto it = j.find("t_ms"); it != j.end()) {
		if (!it->is_number()) throw std::runtime_error("'t_ms' must be a number");
		out.record.wall_ms = it->get<double>();
	}
	return out;
}

std::map<std::uint64_t, OrbitRecord> OrbitCache::load(std::string_view key) const
{
	std::map<std::uint64_t, OrbitRecord> out;
	std::ifstream in(path_);
	if (!in) return out;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		DecodedRecord d;
		try {
			d = decode_record(line);
		} catch (const std::exception& e) {
			throw CacheIntegrityError(path_.string(), lineno, e.what());
		}
		if (d.key != key) continue;
		auto [it, inserted] = out.emplace(d.record.p, d.record);
		if (!inserted && !(it->second == d.record))
			throw CacheIntegrityError(path_.string(), lineno, "conflicting duplicate record for p = " + std::to_string(d.record.p));
	}
	return out;
}

void OrbitCache::append(std::string_view key, const std::vector<OrbitRecord>& records) const
{
	if (records.empty()) return;
	if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
	std::ofstream out(path_, std::ios::app);
	if (!out) throw std::runtime_error("cannot open cache file " + path_.string() + " for appending");
	std::string buf;
	for (const auto& r : records) buf += encode_record(key, r) + "\n";
	out << buf;
	out.flush();
	if (!out) throw std::runtime_error("write to cache file " + path_.string() + " failed");
}

SweepSummary sweep(const SemigroupSystem& s, const ProjectivePointQ& pt, const SweepOptions& opt,
                   const std::function<void(const OrbitRecord&)>& sink)
{
	if (opt.prime_bound < 2) throw ContractError("sweep: prime bound must be >= 2");
	if (opt.prime_bound > kMaxPrime) throw ContractError("sweep: prime bound exceeds " + std::to_string(kMaxPrime));
	const std::string key = system_key(s, pt);
	const auto primes = primes_up_to(opt.prime_bound);
	std::optional<OrbitCache> cache;
	std::map<std::uint64_t, OrbitRecord> cached;
	if (opt.cache_path) {
		cache.emplace(*opt.cache_path);
		cached = cache->load(key);
	}

	std::vector<std::uint64_t> missing;
	for (auto p : primes)
		if (!cached.count(p)) missing.push_back(p);

	struct Block {
		std::vector<OrbitRecord> records;
		bool done = false;
		bool partial = false;
	};
	const std::size_t block = std::max<std::size_t>(1, opt.block);
	std::vector<Block> blocks((missing.size() + block - 1) / block);
	std::mutex mu;
	std::condition_variable cv;
	std::atomic<std::size_t> next_block{0};
	std::atomic<bool> stop{false};
	auto cancelled = [&] { return stop.load() || (opt.cancel && opt.cancel->load()); };

	auto worker = [&] {
		for (;;) {
			const std::size_t b = next_block.fetch_add(1);
			if (b >= blocks.size()) return;
			std::vector<OrbitRecord> recs;
			bool partial = false;
			const std::size_t lo = b * block, hi = std::min(missing.size(), lo + block);
			for (std::size_t i = lo; i < hi; ++i) {
				if (cancelled()) {
					partial = true;
					break;
				}
				recs.push_back(orbit_size_mod_p(s, pt, missing[i], opt.orbit));
			}
			{
				std::lock_guard lk(mu);
				blocks[b].records = std::move(recs);
				blocks[b].partial = partial;
				blocks[b].done = true;
			}
			cv.notify_all();
		}
	};

	std::vector<std::thread> pool;
	const unsigned nworkers = std::max(1u, opt.workers);
	if (!missing.empty())
		for (unsigned w = 0; w < std::min<std::size_t>(nworkers, blocks.size()); ++w) pool.emplace_back(worker);

	SweepSummary summary;
	std::size_t mi = 0;
	try {
		for (auto p : primes) {
			if (auto it = cached.find(p); it != cached.end()) {
				++summary.cache_hits;
				++summary.primes;
				sink(it->second);
				continue;
			}
			const std::size_t b = mi / block, off = mi % block;
			{
				std::unique_lock lk(mu);
				cv.wait(lk, [&] { return blocks[b].done; });
			}
			if (off == 0 && cache) cache->append(key, blocks[b].records);
			if (off >= blocks[b].records.size()) {
				summary.interrupted = true;
				break;
			}
			++summary.computed;
			++summary.primes;
			sink(blocks[b].records[off]);
			++mi;
		}
	} catch (...) {
		stop = true;
		for (auto& t : pool) t.join();
		throw;
	}
	stop = true;
	for (auto& t : pool) t.join();
	return summary;
}

std::vector<OrbitRecord> sweep_records(const SemigroupSystem& s, const ProjectivePointQ& pt, const SweepOptions& opt,
                                       SweepSummary* summary)
{
	std::vector<OrbitRecord> out;
	auto sum = sweep(s, pt, opt, [&](const OrbitRecord& r) { out.push_back(r); });
	if (summary) *summary = sum;
	return out;
}

} // namespace orbmod
