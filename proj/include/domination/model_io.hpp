#pragma once

#include <string>

#include <json.hpp>

#include "domination/model.hpp"

namespace domination::io {

using json = nlohmann::json;

struct ModelFile {
  Model model;
  ReflectionPair r;
};

/// Reads {"kind", "r1", "r2", model fields, optional "shock"}. Unknown,
/// missing or non-numeric fields raise ValidationError naming the field.
/// Parameter admissibility is left to validate().
ModelFile parse_model(const json& j);
ModelFile parse_model_text(const std::string& text);
/// IoError when the file cannot be read; ValidationError on bad content.
ModelFile read_model_file(const std::string& path);

json to_json(const Model& model, const ReflectionPair& r);

/// Copy of j with every floating-point number rounded to the given number
/// of significant digits.
json rounded(const json& j, int digits = 12);

/// Formats a double with the given number of significant digits.
std::string format_number(double value, int digits);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace domination::io
