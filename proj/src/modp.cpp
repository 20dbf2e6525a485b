#include "orbmod/modp.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <unordered_set>

namespace orbmod {

namespace {

std::uint32_t mod_u32(const Integer& v, std::uint32_t p)
{
	return static_cast<std::uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), p));
}

class BitsetVisited {
public:
	explicit BitsetVisited(std::uint64_t n) : bits_((n + 63) / 64, 0) {}
	// 1 if x was not yet present; branch-free
	std::uint32_t insert(std::uint32_t x)
	{
		std::uint64_t& w = bits_[x >> 6];
		const std::uint64_t bit = std::uint64_t{1} << (x & 63);
		const std::uint64_t old = w;
		w = old | bit;
		return static_cast<std::uint32_t>(((old & bit) ^ bit) >> (x & 63));
	}

private:
	std::vector<std::uint64_t> bits_;
};

class HashVisited {
public:
	explicit HashVisited(std::uint64_t) {}
	std::uint32_t insert(std::uint32_t x) { return set_.insert(x).second ? 1u : 0u; }

private:
	std::unordered_set<std::uint32_t> set_;
};

// Growable buffer whose live prefix is tracked separately, so appends can be unconditional.
struct Frontier {
	std::vector<std::uint32_t> buf;
	std::size_t len = 0;
	void reserve_more(std::size_t n)
	{
		if (len + n > buf.size()) buf.resize(std::max(2 * buf.size(), len + n));
	}
};

// Level-synchronous BFS; each frontier chunk is pushed through every map with the batch kernels.
template <class Visited>
std::uint64_t bfs(const ReducedSystem& rs, const kernels::KernelSet& k, std::size_t chunk)
{
	const std::uint32_t p = rs.p();
	const std::uint32_t inf = p;
	Visited visited(std::uint64_t{p} + 1);
	std::uint64_t count = 0;

	Frontier frontier, next;
	std::uint32_t inf_frontier = 0, inf_next = 0;
	// appends every image, but only advances past the new finite ones
	auto visit_all = [&](const std::uint32_t* ys, std::size_t n) {
		next.reserve_more(n);
		std::uint32_t* out = next.buf.data();
		std::size_t len = next.len;
		for (std::size_t i = 0; i < n; ++i) {
			const std::uint32_t y = ys[i];
			const std::uint32_t fresh = visited.insert(y);
			const std::uint32_t at_inf = y == inf;
			count += fresh;
			out[len] = y;
			len += fresh & (at_inf ^ 1u);
			inf_next |= fresh & at_inf;
		}
		next.len = len;
	};

	{
		const std::uint32_t start = rs.point();
		visit_all(&start, 1);
	}
	std::swap(frontier, next);
	std::swap(inf_frontier, inf_next);

	std::vector<std::uint32_t> num(chunk), den(chunk), img(chunk), scratch(chunk + 4);
	while (frontier.len > 0 || inf_frontier) {
		next.len = 0;
		inf_next = 0;
		if (inf_frontier)
			for (std::size_t i = 0; i < rs.maps().size(); ++i) {
				const std::uint32_t y = rs.apply(i, inf);
				visit_all(&y, 1);
			}
		for (std::size_t base = 0; base < frontier.len; base += chunk) {
			const std::size_t n = std::min(chunk, frontier.len - base);
			const std::span<const std::uint32_t> xs(frontier.buf.data() + base, n);
			for (const auto& f : rs.maps()) {
				if (f.den_constant) {
					k.horner(f.num, xs, p, std::span(img.data(), n));
					visit_all(img.data(), n);
					continue;
				}
				k.horner(f.num, xs, p, std::span(num.data(), n));
				k.horner(f.den, xs, p, std::span(den.data(), n));
				std::copy_n(den.begin(), n, img.begin());
				k.batch_invert(std::span(img.data(), n), p, scratch);
				k.mulmod(std::span<const std::uint32_t>(num.data(), n), std::span<const std::uint32_t>(img.data(), n), p,
				         std::span(img.data(), n));
				for (std::size_t i = 0; i < n; ++i) img[i] = den[i] == 0 ? inf : img[i];
				visit_all(img.data(), n);
			}
		}
		std::swap(frontier, next);
		std::swap(inf_frontier, inf_next);
	}
	return count;
}

} // namespace

bool good_reduction(const RationalMapQ& f, std::uint64_t p)
{
	if (p < 2) throw ContractError("good_reduction: p must be prime");
	return mpz_divisible_ui_p(f.resultant().get_mpz_t(), p) == 0;
}

std::uint32_t reduce_point(const ProjectivePointQ& pt, std::uint32_t p)
{
	const std::uint32_t b = mod_u32(pt.b(), p);
	if (b == 0) return p;
	return kernels::mul_mod(mod_u32(pt.a(), p), kernels::inverse_mod(b, p), p);
}

std::optional<ReducedSystem> ReducedSystem::reduce(const SemigroupSystem& s, const ProjectivePointQ& pt, std::uint32_t p)
{
	ReducedSystem rs;
	rs.p_ = p;
	for (const auto& f : s.maps()) {
		if (!good_reduction(f, p)) return std::nullopt;
		Map m;
		for (const auto& c : f.numerator().coefficients()) m.num.push_back(mod_u32(c, p));
		for (const auto& c : f.denominator().coefficients()) m.den.push_back(mod_u32(c, p));
		m.num_lead = m.num.front();
		m.den_lead = m.den.front();
		m.den_constant = std::all_of(m.den.begin(), m.den.end() - 1, [](std::uint32_t v) { return v == 0; });
		if (m.den_constant) {
			// good reduction forces the constant to be a unit
			const std::uint32_t inv = kernels::inverse_mod(m.den.back(), p);
			for (auto& c : m.num) c = kernels::mul_mod(c, inv, p);
		}
		rs.maps_.push_back(std::move(m));
	}
	rs.point_ = reduce_point(pt, p);
	return rs;
}

std::uint32_t ReducedSystem::apply(std::size_t i, std::uint32_t x) const
{
	const Map& f = maps_.at(i);
	std::uint32_t n, d;
	if (x == p_) {
		n = f.num_lead;
		d = f.den_lead;
		if (f.den_constant) return p_; // polynomials fix infinity
	} else {
		kernels::horner_scalar(f.num, std::span(&x, 1), p_, std::span(&n, 1));
		if (f.den_constant) return n;
		kernels::horner_scalar(f.den, std::span(&x, 1), p_, std::span(&d, 1));
	}
	if (d == 0) return p_;
	return kernels::mul_mod(n, kernels::inverse_mod(d, p_), p_);
}

std::uint64_t reduced_orbit_size(const ReducedSystem& rs, const OrbitOptions& opt)
{
	const kernels::KernelSet k = kernels::select_kernels(rs.p(), opt.isa);
	const std::size_t chunk = opt.chunk ? opt.chunk : 4096;
	if (rs.p() < opt.bitset_threshold) return bfs<BitsetVisited>(rs, k, chunk);
	return bfs<HashVisited>(rs, k, chunk);
}

OrbitRecord orbit_size_mod_p(const SemigroupSystem& s, const ProjectivePointQ& pt, std::uint64_t p, const OrbitOptions& opt)
{
	if (p < 2 || p > kMaxPrime) throw ContractError("orbit_size_mod_p: p = " + std::to_string(p) + " out of range");
	const auto start = std::chrono::steady_clock::now();
	OrbitRecord rec;
	rec.p = p;
	if (auto rs = ReducedSystem::reduce(s, pt, static_cast<std::uint32_t>(p))) {
		rec.good_reduction = true;
		rec.m = reduced_orbit_size(*rs, opt);
	}
	rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
	return rec;
}

} // namespace orbmod
