#include "orbmod/system_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace orbmod {

namespace {

using nlohmann::json;

std::string position(std::string_view text, std::size_t byte)
{
	std::size_t line = 1, col = 1;
	for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
		if (text[i] == '\n') {
			++line;
			col = 1;
		} else {
			++col;
		}
	}
	return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Rational to_rational(const json& v, const std::string& where)
{
	if (v.is_number_integer()) return v.is_number_unsigned() ? Rational(std::to_string(v.get<std::uint64_t>()))
	                                                          : Rational(std::to_string(v.get<std::int64_t>()));
	if (v.is_string()) {
		try {
			return parse_rational(v.get<std::string>());
		} catch (const ContractError& e) {
			throw SystemFileError(where + ": " + e.what());
		}
	}
	throw SystemFileError(where + ": expected an integer or a \"p/q\" string");
}

std::vector<Rational> coefficient_list(const json& v, const std::string& where)
{
	if (!v.is_array() || v.empty()) throw SystemFileError(where + ": expected a nonempty array of coefficients");
	std::vector<Rational> out;
	for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_rational(v[i], where + "[" + std::to_string(i) + "]"));
	return out;
}

json integer_array(const BinaryFormZ& f)
{
	json a = json::array();
	for (const auto& c : f.coefficients()) {
		if (c.fits_slong_p())
			a.push_back(c.get_si());
		else
			a.push_back(c.get_str());
	}
	return a;
}

json integer_value(const Integer& c)
{
	if (c.fits_slong_p()) return c.get_si();
	return c.get_str();
}

} // namespace

SystemFile parse_system(std::string_view text, std::string_view origin)
{
	const std::string o(origin);
	json doc;
	try {
		doc = json::parse(text.begin(), text.end());
	} catch (const json::parse_error& e) {
		std::string msg = e.what();
		if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
		throw SystemFileError(o + ": " + position(text, e.byte ? e.byte - 1 : 0) + ": " + msg);
	}
	if (!doc.is_object()) throw SystemFileError(o + ": top level must be an object");
	if (!doc.contains("maps")) throw SystemFileError(o + ": missing \"maps\"");
	if (!doc.contains("point")) throw SystemFileError(o + ": missing \"point\"");
	const json& maps = doc["maps"];
	if (!maps.is_array() || maps.empty()) throw SystemFileError(o + ": \"maps\" must be a nonempty array");

	std::vector<RationalMapQ> parsed;
	for (std::size_t i = 0; i < maps.size(); ++i) {
		const std::string where = o + ": maps[" + std::to_string(i) + "]";
		const json& m = maps[i];
		if (!m.is_object() || !m.contains("num")) throw SystemFileError(where + ": expected {\"num\": [...], \"den\": [...]}");
		const auto num = coefficient_list(m["num"], where + ".num");
		std::vector<Rational> den;
		if (m.contains("den")) {
			den = coefficient_list(m["den"], where + ".den");
		} else {
			den.assign(num.size(), Rational(0));
			den.back() = 1;
		}
		try {
			parsed.push_back(RationalMapQ::from_coefficients(num, den));
		} catch (const ContractError& e) {
			throw SystemFileError(where + ": " + e.what());
		}
	}

	const json& pt = doc["point"];
	if (!pt.is_array() || pt.size() != 2) throw SystemFileError(o + ": \"point\" must be [a, b]");
	SystemFile out{SemigroupSystem(std::vector<RationalMapQ>{parsed.front()}), ProjectivePointQ{}};
	try {
		out.point = normalize_point(to_rational(pt[0], o + ": point[0]"), to_rational(pt[1], o + ": point[1]"));
		out.system = SemigroupSystem(std::move(parsed));
	} catch (const ContractError& e) {
		throw SystemFileError(o + ": " + e.what());
	}
	return out;
}

SystemFile load_system(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) throw SystemFileError(path.string() + ": cannot open system file");
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_system(buf.str(), path.string());
}

std::string dump_system(const SemigroupSystem& s, const ProjectivePointQ& p)
{
	nlohmann::ordered_json doc;
	doc["maps"] = json::array();
	for (const auto& f : s.maps()) {
		nlohmann::ordered_json m;
		m["num"] = integer_array(f.numerator());
		m["den"] = integer_array(f.denominator());
		doc["maps"].push_back(m);
	}
	doc["point"] = {integer_value(p.a()), integer_value(p.b())};
	return doc.dump(2) + "\n";
}

} // namespace orbmod
