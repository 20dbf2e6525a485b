#pragma once
// System files: one JSON document holding the maps and the base point.
//
//   {"maps": [{"num": [1, 0, 1], "den": [0, 0, 1]}, {"num": [1, 0, -1]}],
//    "point": [0, 1]}
//
// Coefficients run from the X^d term down to Z^d and may be integers or "p/q" strings.
// A missing "den" means the constant 1 (a polynomial). "point" is [a, b] for [a:b].

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "orbmod/dynamics.hpp"

namespace orbmod {

class SystemFileError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct SystemFile {
	SemigroupSystem system;
	ProjectivePointQ point;
};

// Throws SystemFileError with "line L, column C" for syntax errors and a JSON path for
// semantic ones. `origin` only labels messages.
SystemFile parse_system(std::string_view text, std::string_view origin = "<input>");
SystemFile load_system(const std::filesystem::path& path);

std::string dump_system(const SemigroupSystem& s, const ProjectivePointQ& p);

} // namespace orbmod
