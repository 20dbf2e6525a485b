#pragma once
// Command-line surface: verify, sweep, analyze, report, sample.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace orbmod::cli {

enum ExitCode : int {
	kOk = 0,
	kInputError = 2,
	kNoRoute = 3,
	kAbelResidual = 4,
	kCacheMissing = 5,
	kInterrupted = 130,
};

inline constexpr double kAbelTolerance = 1e-9;

struct RunConfig {
	std::filesystem::path system;
	std::uint64_t prime_bound = 0;
	std::vector<double> epsilons{0.1, 0.5, 1.0};
	std::vector<double> gammas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
	std::vector<double> s_grid;                // empty: {1 + 1/log X}
	std::vector<std::uint64_t> m_list{1, 2, 4, 8, 16};
	double subexp_c = 1.0;
	double subexp_beta = 0.5;
	int depth = 3;
	unsigned workers = 1;
	std::optional<std::filesystem::path> cache; // default <out>/cache.jsonl
	std::filesystem::path out = "orbmod-out";
	std::uint64_t seed = 1;
	// sample
	std::vector<int> degrees{4, 4};
	int attempts = 500;
	int height = 10;

	std::filesystem::path cache_path() const { return cache ? *cache : out / "cache.jsonl"; }
};

// Reads a JSON config; keys mirror the long flag names with '-' replaced by '_'.
RunConfig load_config(const std::filesystem::path& path);

int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log, const std::atomic<bool>* cancel = nullptr);
int cmd_analyze(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);
int cmd_sample(const RunConfig& cfg, std::ostream& log);

// Full argument parsing and dispatch. SIGINT during a sweep yields kInterrupted.
int run(int argc, char** argv);

} // namespace orbmod::cli
