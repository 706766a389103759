#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ldeform/lie.hpp"
#include "ldeform/linfty.hpp"
#include "ldeform/transport.hpp"

namespace ldeform::io {

// Malformed input. where() is "line L, column C" for syntax errors and a JSON
// pointer such as "/brackets/0/entries/3/coeff" for semantic ones.
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

using json = nlohmann::ordered_json;

// Objects and arrays of objects one item per line; arrays of scalars and slot
// lists on a single line. Trailing newline.
std::string pretty(const json& j);

inline constexpr std::string_view kAlgebraFormat = "ldeform-algebra/1";
inline constexpr std::string_view kLieFormat = "ldeform-lie/1";
inline constexpr std::string_view kPathFormat = "ldeform-path/1";

// "algebra", "lie" or "path", from the format field.
std::string detect_format(std::string_view text);

LInftyAlgebra parse_algebra(std::string_view text);
std::string serialize_algebra(const LInftyAlgebra& alg);

LieStructure parse_lie(std::string_view text);
std::string serialize_lie(const LieStructure& mu);

// Orbit paths ({"kind":"orbit","A":...}) are anchored at mu0.
DeformationPath parse_path(std::string_view text, const LieStructure& mu0);

// "deg:idx=coeff" items separated by commas; empty text is the zero element.
Element parse_element(std::string_view text, const SpacePtr& space);

std::string read_file(const std::string& path);
// FNV-1a, 64 bit, as 16 hex digits.
std::string digest(std::string_view bytes);

}  // namespace ldeform::io
