#pragma once
// Finite-range statistics of orbit sizes m_p. Every value is a truncation at the sweep bound.
// Records with m_p = infinity (bad reduction) contribute zero to every sum.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbmod/dynamics.hpp"
#include "orbmod/modp.hpp"

namespace orbmod {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
	void add(double x) noexcept;
	double value() const noexcept { return sum_ + comp_; }

private:
	double sum_ = 0.0, comp_ = 0.0;
};

struct EpsilonSumResult {
	double epsilon = 0.0;
	std::uint64_t prime_bound = 0;
	double value = 0.0;     // sum log p / (p m_p^eps)
	double implied_C = 0.0; // value * epsilon
};

// prime_bound defaults to the largest prime in the records.
EpsilonSumResult epsilon_sum(std::span<const OrbitRecord> records, double epsilon,
                             std::optional<std::uint64_t> prime_bound = std::nullopt);

struct AbelCrosscheck {
	double direct = 0.0;
	double regrouped = 0.0;
	double relative_residual() const noexcept;
};

// The epsilon-sum evaluated directly and through the Abel-regrouped form
//   sum_{m=1}^{M} (G(m) - G(m+1)) S(m) + G(M+1) S(M),  S(m) = sum_{m_p <= m} log p / p,
// with G(t) = t^-eps and M the largest finite m_p.
AbelCrosscheck abel_crosscheck(std::span<const OrbitRecord> records, double epsilon);

struct DensityCurve {
	double parameter = 0.0; // gamma, or c of the subexponential spec
	std::vector<double> s;
	std::vector<double> value; // (s - 1) sum_{p in P} log p / p^s
	std::size_t members = 0;   // |P| among the records
};

// P_gamma = { good p : m_p <= p^gamma }.
DensityCurve density_estimate(std::span<const OrbitRecord> records, double gamma, std::span<const double> s_grid);

/// L(t) = exp(c (log t)^beta), c > 0, 0 < beta < 1.
struct SubexponentialSpec {
	double c = 1.0;
	double beta = 0.5;

	SubexponentialSpec() = default;
	SubexponentialSpec(double c_, double beta_);
	double operator()(double t) const;
};

// P_L = { good p : m_p <= L(p) }.
DensityCurve subexp_density(std::span<const OrbitRecord> records, const SubexponentialSpec& spec,
                            std::span<const double> s_grid);

// log N D(m) = sum over good p with m_p <= m of log p.
double dm_lognorm(std::span<const OrbitRecord> records, std::uint64_t m);

// 1 + log(d_1 + ... + d_r) / log r
double c5_constant(std::span<const int> degrees);

struct GrowthRow {
	std::uint64_t m = 0;
	int k = 0;
	std::optional<double> log_dprime;     // empty when D'(m) = 0 or over budget
	std::optional<double> loglog_dprime;
	double c5_log = 0.0;                  // C5 log(m + 1)
	std::string note;
};

std::vector<GrowthRow> growth_report(const SemigroupSystem& s, const ProjectivePointQ& pt,
                                     std::span<const std::uint64_t> m_list,
                                     std::size_t pair_budget = kDefaultPairBudget);

} // namespace orbmod
