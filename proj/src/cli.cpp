#include "orbmod/cli.hpp"

#include <algorithm>
#include <csignal>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "orbmod/analytics.hpp"
#include "orbmod/hypothesis.hpp"
#include "orbmod/primes.hpp"
#include "orbmod/sweep.hpp"
#include "orbmod/system_io.hpp"

namespace orbmod::cli {

namespace {

using Json = nlohmann::ordered_json;

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

std::string fmt(double v)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
	if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) throw std::runtime_error("cannot write " + path.string());
	out << text;
	if (!out.flush()) throw std::runtime_error("write to " + path.string() + " failed");
}

void prepare_out(const RunConfig& cfg)
{
	std::error_code ec;
	std::filesystem::create_directories(cfg.out, ec);
	if (ec || !std::filesystem::is_directory(cfg.out))
		throw ContractError("output directory " + cfg.out.string() + " is not writable");
	const auto probe = cfg.out / ".write-probe";
	{
		std::ofstream t(probe);
		if (!t) throw ContractError("output directory " + cfg.out.string() + " is not writable");
	}
	std::filesystem::remove(probe, ec);
}

std::vector<double> s_grid_for(const RunConfig& cfg)
{
	if (!cfg.s_grid.empty()) return cfg.s_grid;
	return {1.0 + 1.0 / std::log(static_cast<double>(cfg.prime_bound))};
}

Json word_json(const Word& w) { return w.to_string(); }

Json left_factor_json(const std::optional<LeftFactor>& lf)
{
	if (!lf) return nullptr;
	Json j;
	j["g"] = lf->rational_g ? Json(lf->rational_g->to_string()) : Json(nullptr);
	j["h"] = lf->h.to_string();
	j["u"] = lf->u.get_str();
	j["v"] = lf->v.get_str();
	j["alpha_poly"] = lf->alpha_poly.to_string("a");
	return j;
}

Json verify_json(const SystemFile& sf, const VerifyReport& rep)
{
	Json j;
	j["system"] = sf.system.canonical_string();
	j["point"] = sf.point.to_string();
	j["route"] = rep.route;
	j["maps"] = Json::array();
	for (std::size_t i = 0; i < rep.maps.size(); ++i) {
		const auto& m = rep.maps[i];
		Json mj;
		mj["index"] = i + 1;
		mj["degree"] = m.degree;
		mj["polynomial"] = m.power_like.has_value();
		Json cv;
		cv["finite_poly"] = m.critical.values.to_string("w");
		cv["profile"] = Json::array();
		for (const auto& [f, e] : m.critical.profile) cv["profile"].push_back(Json{{"factor", f.to_string("w")}, {"multiplicity", e}});
		cv["infinity_multiplicity"] = m.critical.infinity_multiplicity;
		cv["total_multiplicity"] = m.critical.total_multiplicity();
		const Mobius& c = m.critical.chart;
		cv["chart"] = {c.a, c.b, c.c, c.e};
		mj["critical_values"] = cv;
		mj["critically_simple"] = m.critically_simple;
		if (m.power_like) {
			Json pl;
			pl["value"] = m.power_like->is_power_like;
			pl["witness"] = m.power_like->witness ? Json(m.power_like->witness->to_string()) : Json(nullptr);
			mj["power_like"] = pl;
		} else {
			mj["power_like"] = nullptr;
		}
		j["maps"].push_back(mj);
	}
	j["pairs"] = Json::array();
	for (const auto& p : rep.pairs) {
		Json pj;
		pj["i"] = p.i;
		pj["j"] = p.j;
		pj["critically_separated"] = p.critically_separated;
		const auto g = genus_constants(rep.maps[p.i - 1].degree, rep.maps[p.j - 1].degree);
		pj["genus"] = {{"diag", g.diag}, {"cross", g.cross}, {"both_at_least_two", g.both_at_least_two()}};
		pj["ratmaps_route"] = p.ratmaps_route;
		pj["both_polynomial"] = p.both_polynomial;
		pj["f_i_equals_f_j_of_g"] = left_factor_json(p.first_over_second);
		pj["f_j_equals_f_i_of_g"] = left_factor_json(p.second_over_first);
		pj["poly_route"] = p.poly_route;
		j["pairs"].push_back(pj);
	}
	Json cert;
	cert["depth"] = rep.depth;
	if (const auto* c = std::get_if<CollisionWitness>(&rep.wandering)) {
		cert["wandering"] = {{"collision", {{"first", word_json(c->first)}, {"second", word_json(c->second)},
		                                    {"value", c->value.to_string()}}}};
	} else {
		const auto& n = std::get<NoCollisionUpToDepth>(rep.wandering);
		cert["wandering"] = {{"collision", nullptr}, {"words_checked", n.words_checked}};
	}
	cert["preperiodic"] = rep.preperiodic ? Json{{"f", word_json(rep.preperiodic->f)}, {"g", word_json(rep.preperiodic->g)}}
	                                      : Json(nullptr);
	if (rep.freeness) {
		cert["freeness"] = {{"distinct", rep.freeness->distinct()}, {"words_checked", rep.freeness->words_checked}};
		if (rep.freeness->equal_words)
			cert["freeness"]["equal_words"] = {word_json(rep.freeness->equal_words->first),
			                                   word_json(rep.freeness->equal_words->second)};
	} else {
		cert["freeness"] = "over budget";
	}
	j["certificates"] = cert;
	return j;
}

struct Outcome {
	int code = kOk;
	Json json;
};

Outcome verify_outcome(const RunConfig& cfg, std::ostream& log)
{
	const SystemFile sf = load_system(cfg.system);
	const VerifyReport rep = verify_system(sf.system, sf.point, cfg.depth);
	Outcome o;
	o.json = verify_json(sf, rep);
	o.code = rep.route == "none" ? kNoRoute : kOk;
	log << "route: " << rep.route << "\n";
	return o;
}

Outcome analyze_outcome(const RunConfig& cfg, std::ostream& log)
{
	if (cfg.prime_bound < 2) throw ContractError("--primes-up-to must be >= 2");
	if (cfg.epsilons.empty() || cfg.gammas.empty()) throw ContractError("epsilon and gamma grids must be nonempty");
	const SystemFile sf = load_system(cfg.system);
	const std::string key = system_key(sf.system, sf.point);
	const OrbitCache cache(cfg.cache_path());
	const auto cached = cache.load(key);
	const auto primes = primes_up_to(cfg.prime_bound);

	Outcome o;
	o.json["truncated_at_X"] = cfg.prime_bound;
	o.json["system_key"] = key;
	std::vector<OrbitRecord> records;
	std::size_t missing = 0;
	for (auto p : primes) {
		auto it = cached.find(p);
		if (it == cached.end())
			++missing;
		else
			records.push_back(it->second);
	}
	if (missing) {
		log << "cache " << cache.path().string() << " lacks " << missing << " of " << primes.size()
		    << " primes <= " << cfg.prime_bound << "; run `orbmod sweep` first\n";
		o.code = kCacheMissing;
		o.json["status"] = "cache_missing";
		o.json["missing_primes"] = missing;
		return o;
	}

	const std::string header = "# truncated_at_X=" + std::to_string(cfg.prime_bound) + "\n";
	std::size_t good = 0;
	for (const auto& r : records) good += r.good_reduction;
	o.json["primes"] = records.size();
	o.json["good_primes"] = good;

	std::string eps_csv = header + "epsilon,value,implied_C,abel_direct,abel_regrouped,abel_relative_residual\n";
	Json eps_rows = Json::array();
	double c_max = 0.0, worst = 0.0;
	for (double eps : cfg.epsilons) {
		const auto es = epsilon_sum(records, eps, cfg.prime_bound);
		const auto ab = abel_crosscheck(records, eps);
		c_max = std::max(c_max, es.implied_C);
		worst = std::max(worst, ab.relative_residual());
		eps_csv += fmt(eps) + "," + fmt(es.value) + "," + fmt(es.implied_C) + "," + fmt(ab.direct) + "," +
		           fmt(ab.regrouped) + "," + fmt(ab.relative_residual()) + "\n";
		eps_rows.push_back({{"epsilon", eps}, {"value", es.value}, {"implied_C", es.implied_C},
		                    {"abel_direct", ab.direct}, {"abel_regrouped", ab.regrouped},
		                    {"abel_relative_residual", ab.relative_residual()}});
	}
	o.json["epsilon_sum"] = eps_rows;
	o.json["implied_C_max"] = c_max;
	o.json["abel_max_relative_residual"] = worst;

	const auto s_grid = s_grid_for(cfg);
	std::string gamma_csv = header + "gamma,s,value,members,implied_C_times_gamma\n";
	Json gamma_rows = Json::array();
	for (double g : cfg.gammas) {
		const auto curve = density_estimate(records, g, s_grid);
		for (std::size_t i = 0; i < s_grid.size(); ++i) {
			gamma_csv += fmt(g) + "," + fmt(s_grid[i]) + "," + fmt(curve.value[i]) + "," +
			             std::to_string(curve.members) + "," + fmt(c_max * g) + "\n";
			gamma_rows.push_back({{"gamma", g}, {"s", s_grid[i]}, {"value", curve.value[i]},
			                      {"members", curve.members}, {"implied_C_times_gamma", c_max * g}});
		}
	}
	o.json["density_gamma"] = gamma_rows;

	const SubexponentialSpec spec(cfg.subexp_c, cfg.subexp_beta);
	const auto sub = subexp_density(records, spec, s_grid);
	std::string sub_csv = header + "c,beta,s,value,members\n";
	Json sub_rows = Json::array();
	for (std::size_t i = 0; i < s_grid.size(); ++i) {
		sub_csv += fmt(spec.c) + "," + fmt(spec.beta) + "," + fmt(s_grid[i]) + "," + fmt(sub.value[i]) + "," +
		           std::to_string(sub.members) + "\n";
		sub_rows.push_back({{"c", spec.c}, {"beta", spec.beta}, {"s", s_grid[i]}, {"value", sub.value[i]},
		                    {"members", sub.members}});
	}
	o.json["density_subexp"] = sub_rows;

	std::string dm_csv = header + "m,log_norm_D\n";
	Json dm_rows = Json::array();
	for (auto m : cfg.m_list) {
		const double v = dm_lognorm(records, m);
		dm_csv += std::to_string(m) + "," + fmt(v) + "\n";
		dm_rows.push_back({{"m", m}, {"log_norm_D", v}});
	}
	o.json["dm_lognorm"] = dm_rows;

	std::string growth_csv = header + "m,k,log_dprime,loglog_dprime,c5_log_m_plus_1,note\n";
	Json growth_rows = Json::array();
	if (sf.system.size() >= 2) {
		const auto degrees = sf.system.degrees();
		o.json["c5"] = c5_constant(degrees);
		for (const auto& row : growth_report(sf.system, sf.point, cfg.m_list)) {
			auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("NA"); };
			growth_csv += std::to_string(row.m) + "," + std::to_string(row.k) + "," + opt(row.log_dprime) + "," +
			              opt(row.loglog_dprime) + "," + fmt(row.c5_log) + ",\"" + row.note + "\"\n";
			auto jopt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
			growth_rows.push_back({{"m", row.m}, {"k", row.k}, {"log_dprime", jopt(row.log_dprime)},
			                       {"loglog_dprime", jopt(row.loglog_dprime)}, {"c5_log_m_plus_1", row.c5_log},
			                       {"note", row.note}});
		}
	}
	o.json["growth"] = growth_rows;

	write_file(cfg.out / "epsilon_sum.csv", eps_csv);
	write_file(cfg.out / "density_gamma.csv", gamma_csv);
	write_file(cfg.out / "density_subexp.csv", sub_csv);
	write_file(cfg.out / "dm_lognorm.csv", dm_csv);
	write_file(cfg.out / "growth.csv", growth_csv);

	o.code = worst > kAbelTolerance ? kAbelResidual : kOk;
	o.json["status"] = o.code == kOk ? "ok" : "abel_residual_exceeded";
	log << "analyzed " << records.size() << " primes <= " << cfg.prime_bound << "; max Abel residual " << fmt(worst)
	    << "\n";
	return o;
}

// Runs `body`, mapping input errors to exit code 2.
template <class F>
int guarded(std::ostream& log, F&& body)
{
	try {
		return body();
	} catch (const SystemFileError& e) {
		log << "error: " << e.what() << "\n";
	} catch (const CacheIntegrityError& e) {
		log << "error: corrupt cache: " << e.what() << "\n";
	} catch (const ContractError& e) {
		log << "error: " << e.what() << "\n";
	} catch (const nlohmann::json::exception& e) {
		log << "error: " << e.what() << "\n";
	}
	return kInputError;
}

template <class T>
void take(const Json& j, const char* key, T& dst)
{
	if (j.contains(key)) dst = j.at(key).get<T>();
}

} // namespace

RunConfig load_config(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in) throw ContractError("cannot open config file " + path.string());
	Json j;
	try {
		j = Json::parse(in);
	} catch (const nlohmann::json::parse_error& e) {
		throw ContractError(path.string() + ": " + e.what());
	}
	if (!j.is_object()) throw ContractError(path.string() + ": config must be an object");
	static const char* known[] = {"system", "primes_up_to", "epsilon", "gamma",   "s_grid", "m",
	                              "subexp_c", "subexp_beta", "depth", "workers", "cache",  "out",
	                              "seed",   "degrees",      "attempts", "height"};
	for (const auto& [k, v] : j.items())
		if (std::find(std::begin(known), std::end(known), k) == std::end(known))
			throw ContractError(path.string() + ": unknown config key '" + k + "'");
	RunConfig c;
	try {
		if (j.contains("system")) c.system = j["system"].get<std::string>();
		take(j, "primes_up_to", c.prime_bound);
		take(j, "epsilon", c.epsilons);
		take(j, "gamma", c.gammas);
		take(j, "s_grid", c.s_grid);
		take(j, "m", c.m_list);
		take(j, "subexp_c", c.subexp_c);
		take(j, "subexp_beta", c.subexp_beta);
		take(j, "depth", c.depth);
		take(j, "workers", c.workers);
		if (j.contains("cache")) c.cache = j["cache"].get<std::string>();
		if (j.contains("out")) c.out = j["out"].get<std::string>();
		take(j, "seed", c.seed);
		take(j, "degrees", c.degrees);
		take(j, "attempts", c.attempts);
		take(j, "height", c.height);
	} catch (const nlohmann::json::exception& e) {
		throw ContractError(path.string() + ": " + e.what());
	}
	return c;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log)
{
	return guarded(log, [&] {
		prepare_out(cfg);
		Outcome o = verify_outcome(cfg, log);
		write_file(cfg.out / "verify.json", o.json.dump(2) + "\n");
		return o.code;
	});
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log, const std::atomic<bool>* cancel)
{
	return guarded(log, [&] {
		if (cfg.prime_bound < 2) throw ContractError("--primes-up-to must be >= 2");
		prepare_out(cfg);
		const SystemFile sf = load_system(cfg.system);
		SweepOptions opt;
		opt.prime_bound = cfg.prime_bound;
		opt.cache_path = cfg.cache_path();
		opt.workers = std::max(1u, cfg.workers);
		opt.cancel = cancel;
		std::size_t seen = 0, last_report = 0;
		std::uint64_t last_p = 0;
		const auto summary = sweep(sf.system, sf.point, opt, [&](const OrbitRecord& r) {
			if (r.p <= last_p) throw std::logic_error("sweep emitted primes out of order");
			last_p = r.p;
			if (++seen - last_report >= 10000) {
				last_report = seen;
				log << "  " << seen << " primes, up to " << r.p << "\n";
			}
		});
		log << "sweep to " << cfg.prime_bound << ": " << summary.primes << " primes (" << summary.cache_hits
		    << " cached, " << summary.computed << " computed)\n";
		if (summary.interrupted) {
			log << "interrupted; cache " << opt.cache_path->string() << " holds a valid prefix\n";
			return static_cast<int>(kInterrupted);
		}
		return static_cast<int>(kOk);
	});
}

int cmd_analyze(const RunConfig& cfg, std::ostream& log)
{
	return guarded(log, [&] {
		prepare_out(cfg);
		Outcome o = analyze_outcome(cfg, log);
		write_file(cfg.out / "analyze.json", o.json.dump(2) + "\n");
		return o.code;
	});
}

int cmd_report(const RunConfig& cfg, std::ostream& log)
{
	return guarded(log, [&] {
		prepare_out(cfg);
		Outcome v = verify_outcome(cfg, log);
		Outcome a = analyze_outcome(cfg, log);
		Json j;
		j["truncated_at_X"] = cfg.prime_bound;
		j["seed"] = cfg.seed;
		j["verify"] = v.json;
		j["analyze"] = a.json;
		write_file(cfg.out / "report.json", j.dump(2) + "\n");
		return a.code != kOk ? a.code : v.code;
	});
}

int cmd_sample(const RunConfig& cfg, std::ostream& log)
{
	return guarded(log, [&] {
		prepare_out(cfg);
		const auto rep = sample_good_family(cfg.degrees, cfg.attempts, cfg.height, cfg.seed);
		Json j;
		j["degrees"] = rep.degrees;
		j["attempts"] = rep.attempts;
		j["height"] = rep.height;
		j["seed"] = rep.seed;
		j["used_attempts"] = rep.used_attempts;
		j["first_not_simple"] = rep.first_not_simple;
		j["second_not_simple"] = rep.second_not_simple;
		j["not_separated"] = rep.not_separated;
		j["found"] = rep.system.has_value();
		if (rep.system) {
			const ProjectivePointQ p = affine_point(0);
			j["system"] = rep.system->canonical_string();
			write_file(cfg.out / "sampled_system.json", dump_system(*rep.system, p));
			log << "found after " << rep.used_attempts << " attempts; wrote "
			    << (cfg.out / "sampled_system.json").string() << "\n";
		} else {
			log << "no critically simple, separated pair in " << rep.attempts << " attempts\n";
		}
		write_file(cfg.out / "sample.json", j.dump(2) + "\n");
		return rep.system ? static_cast<int>(kOk) : static_cast<int>(kNoRoute);
	});
}

int run(int argc, char** argv)
{
	CLI::App app{"orbmod: orbit sizes of rational-map semigroups modulo primes"};
	app.require_subcommand(1);

	std::string system, cache, out, config;
	std::uint64_t prime_bound = 0, seed = 1;
	std::vector<double> eps, gammas, s_grid;
	std::vector<std::uint64_t> ms;
	std::vector<int> degrees;
	double sub_c = 1.0, sub_beta = 0.5;
	int depth = 3, attempts = 500, height = 10;
	unsigned workers = 1;

	struct Opts {
		CLI::Option *system, *primes, *eps, *gamma, *s_grid, *m, *sub_c, *sub_beta, *depth, *workers, *cache, *out,
			*seed, *degrees, *attempts, *height;
	};
	std::map<std::string, Opts> opts;
	auto add = [&](const char* name, const char* help) {
		CLI::App* sub = app.add_subcommand(name, help);
		Opts o{};
		sub->add_option("--config", config, "JSON config file; flags take precedence")->check(CLI::ExistingFile);
		o.system = sub->add_option("--system", system, "system file (JSON)");
		o.primes = sub->add_option("--primes-up-to", prime_bound, "prime bound X");
		o.eps = sub->add_option("--epsilon", eps, "epsilon grid")->delimiter(',');
		o.gamma = sub->add_option("--gamma", gammas, "gamma grid")->delimiter(',');
		o.s_grid = sub->add_option("--s-grid", s_grid, "s grid for densities (default 1 + 1/log X)")->delimiter(',');
		o.m = sub->add_option("--m", ms, "m list")->delimiter(',');
		o.sub_c = sub->add_option("--subexp-c", sub_c, "c in L(t) = exp(c (log t)^beta)");
		o.sub_beta = sub->add_option("--subexp-beta", sub_beta, "beta in L(t)");
		o.depth = sub->add_option("--depth", depth, "word depth for certificates");
		o.workers = sub->add_option("--workers", workers, "sweep worker threads");
		o.cache = sub->add_option("--cache", cache, "JSONL orbit cache (default <out>/cache.jsonl)");
		o.out = sub->add_option("--out", out, "output directory");
		o.seed = sub->add_option("--seed", seed, "sampler seed");
		o.degrees = sub->add_option("--degrees", degrees, "sample degrees")->delimiter(',');
		o.attempts = sub->add_option("--attempts", attempts, "sample attempts");
		o.height = sub->add_option("--height", height, "sample coefficient height");
		opts[name] = o;
	};
	add("verify", "check the theorem hypotheses for a system");
	add("sweep", "compute m_p for all primes up to X into the cache");
	add("analyze", "emit epsilon-sum, density, D(m) and growth reports from the cache");
	add("report", "verify and analyze into one JSON document");
	add("sample", "draw a degree-(d1, d2, ...) system whose first two maps are critically simple and separated");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : kInputError;
	}

	const std::string name = app.get_subcommands().front()->get_name();
	const Opts& o = opts.at(name);
	RunConfig cfg;
	cfg.workers = std::max(1u, std::thread::hardware_concurrency());
	try {
		if (!config.empty()) cfg = load_config(config);
	} catch (const ContractError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInputError;
	}
	if (o.system->count()) cfg.system = system;
	if (o.primes->count()) cfg.prime_bound = prime_bound;
	if (o.eps->count()) cfg.epsilons = eps;
	if (o.gamma->count()) cfg.gammas = gammas;
	if (o.s_grid->count()) cfg.s_grid = s_grid;
	if (o.m->count()) cfg.m_list = ms;
	if (o.sub_c->count()) cfg.subexp_c = sub_c;
	if (o.sub_beta->count()) cfg.subexp_beta = sub_beta;
	if (o.depth->count()) cfg.depth = depth;
	if (o.workers->count()) cfg.workers = workers;
	if (o.cache->count()) cfg.cache = cache;
	if (o.out->count()) cfg.out = out;
	if (o.seed->count()) cfg.seed = seed;
	if (o.degrees->count()) cfg.degrees = degrees;
	if (o.attempts->count()) cfg.attempts = attempts;
	if (o.height->count()) cfg.height = height;

	if (name != "sample" && cfg.system.empty()) {
		std::cerr << "error: --system is required\n";
		return kInputError;
	}
	if (name == "verify") return cmd_verify(cfg, std::cerr);
	if (name == "analyze") return cmd_analyze(cfg, std::cerr);
	if (name == "report") return cmd_report(cfg, std::cerr);
	if (name == "sample") return cmd_sample(cfg, std::cerr);

	g_interrupted = false;
	auto previous = std::signal(SIGINT, on_sigint);
	const int code = cmd_sweep(cfg, std::cerr, &g_interrupted);
	std::signal(SIGINT, previous);
	return code;
}

} // namespace orbmod::cli
