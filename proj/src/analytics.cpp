#include "orbmod/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace orbmod {

void CompensatedSum::add(double x) noexcept
{
	const double t = sum_ + x;
	if (std::fabs(sum_) >= std::fabs(x))
		comp_ += (sum_ - t) + x;
	else
		comp_ += (x - t) + sum_;
	sum_ = t;
}

namespace {

double log_over(std::uint64_t p) { return std::log(static_cast<double>(p)) / static_cast<double>(p); }

// G(m) - G(m+1) for G(t) = t^-eps, without cancellation.
double g_step(std::uint64_t m, double eps)
{
	const double md = static_cast<double>(m);
	return std::pow(md, -eps) * -std::expm1(-eps * std::log1p(1.0 / md));
}

void require_epsilon(double eps)
{
	if (!(eps > 0.0)) throw ContractError("epsilon must be > 0");
}

template <class Member>
DensityCurve density_over(std::span<const OrbitRecord> records, std::span<const double> s_grid, Member&& member)
{
	DensityCurve curve;
	curve.s.assign(s_grid.begin(), s_grid.end());
	std::vector<CompensatedSum> sums(s_grid.size());
	for (const auto& r : records) {
		if (!r.m || !member(r)) continue;
		++curve.members;
		const double lp = std::log(static_cast<double>(r.p));
		for (std::size_t i = 0; i < s_grid.size(); ++i) sums[i].add(lp * std::exp(-s_grid[i] * lp));
	}
	for (std::size_t i = 0; i < s_grid.size(); ++i) curve.value.push_back((s_grid[i] - 1.0) * sums[i].value());
	return curve;
}

} // namespace

EpsilonSumResult epsilon_sum(std::span<const OrbitRecord> records, double epsilon, std::optional<std::uint64_t> prime_bound)
{
	require_epsilon(epsilon);
	EpsilonSumResult out;
	out.epsilon = epsilon;
	std::uint64_t bound = 0;
	for (const auto& r : records) bound = std::max(bound, r.p);
	out.prime_bound = prime_bound.value_or(bound);
	CompensatedSum acc;
	for (const auto& r : records) {
		if (!r.m || r.p > out.prime_bound) continue;
		acc.add(log_over(r.p) * std::pow(static_cast<double>(*r.m), -epsilon));
	}
	out.value = acc.value();
	out.implied_C = out.value * epsilon;
	return out;
}

double AbelCrosscheck::relative_residual() const noexcept
{
	const double scale = std::max(std::fabs(direct), std::fabs(regrouped));
	if (scale == 0.0) return 0.0;
	return std::fabs(direct - regrouped) / scale;
}

AbelCrosscheck abel_crosscheck(std::span<const OrbitRecord> records, double epsilon)
{
	require_epsilon(epsilon);
	AbelCrosscheck out;
	out.direct = epsilon_sum(records, epsilon).value;

	std::uint64_t max_m = 0;
	for (const auto& r : records)
		if (r.m) max_m = std::max(max_m, *r.m);
	if (max_m == 0) return out;

	// mass[m] = sum of log p / p over records with m_p = m
	std::vector<CompensatedSum> mass(max_m + 1);
	for (const auto& r : records)
		if (r.m) mass[*r.m].add(log_over(r.p));

	CompensatedSum partial, total;
	for (std::uint64_t m = 1; m <= max_m; ++m) {
		partial.add(mass[m].value());
		total.add(g_step(m, epsilon) * partial.value());
	}
	total.add(std::pow(static_cast<double>(max_m + 1), -epsilon) * partial.value());
	out.regrouped = total.value();
	return out;
}

DensityCurve density_estimate(std::span<const OrbitRecord> records, double gamma, std::span<const double> s_grid)
{
	if (!(gamma > 0.0 && gamma < 1.0)) throw ContractError("gamma must lie in (0, 1)");
	auto curve = density_over(records, s_grid, [gamma](const OrbitRecord& r) {
		return std::log(static_cast<double>(*r.m)) <= gamma * std::log(static_cast<double>(r.p));
	});
	curve.parameter = gamma;
	return curve;
}

SubexponentialSpec::SubexponentialSpec(double c_, double beta_) : c(c_), beta(beta_)
{
	if (!(c > 0.0)) throw ContractError("subexponential spec needs c > 0");
	if (!(beta > 0.0 && beta < 1.0)) throw ContractError("subexponential spec needs 0 < beta < 1");
}

double SubexponentialSpec::operator()(double t) const
{
	if (t <= 1.0) return 1.0;
	return std::exp(c * std::pow(std::log(t), beta));
}

DensityCurve subexp_density(std::span<const OrbitRecord> records, const SubexponentialSpec& spec,
                            std::span<const double> s_grid)
{
	auto curve = density_over(records, s_grid, [&spec](const OrbitRecord& r) {
		return static_cast<double>(*r.m) <= spec(static_cast<double>(r.p));
	});
	curve.parameter = spec.c;
	return curve;
}

double dm_lognorm(std::span<const OrbitRecord> records, std::uint64_t m)
{
	CompensatedSum acc;
	for (const auto& r : records)
		if (r.m && *r.m <= m) acc.add(std::log(static_cast<double>(r.p)));
	return acc.value();
}

double c5_constant(std::span<const int> degrees)
{
	if (degrees.size() < 2) throw ContractError("C5 needs r >= 2");
	double sum = 0;
	for (int d : degrees) sum += d;
	return 1.0 + std::log(sum) / std::log(static_cast<double>(degrees.size()));
}

std::vector<GrowthRow> growth_report(const SemigroupSystem& s, const ProjectivePointQ& pt,
                                     std::span<const std::uint64_t> m_list, std::size_t pair_budget)
{
	if (s.size() < 2) throw ContractError("growth_report needs r >= 2");
	const auto degrees = s.degrees();
	const double c5 = c5_constant(degrees);
	std::map<int, GrowthRow> by_k; // D'(m) depends on m only through k(m)
	std::vector<GrowthRow> rows;
	for (auto m : m_list) {
		if (m < 1) throw ContractError("growth_report: m must be >= 1");
		const int k = word_length_for(m, s.size());
		auto it = by_k.find(k);
		if (it == by_k.end()) {
			GrowthRow base;
			base.k = k;
			try {
				const DPrimeResult d = dprime(s, pt, m, 0, pair_budget);
				if (d.collision) {
					base.note = "not applicable: D'(m) = 0, words " + d.collision->first.to_string() + " and " +
					            d.collision->second.to_string() + " collide";
				} else {
					base.log_dprime = d.log_value();
					if (*base.log_dprime > 0) base.loglog_dprime = std::log(*base.log_dprime);
				}
			} catch (const BudgetExceeded& e) {
				base.note = std::string("not computed: ") + e.what();
			}
			it = by_k.emplace(k, base).first;
		}
		GrowthRow row = it->second;
		row.m = m;
		row.c5_log = c5 * std::log(static_cast<double>(m) + 1.0);
		rows.push_back(std::move(row));
	}
	return rows;
}

} // namespace orbmod
