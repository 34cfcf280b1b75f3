#ifndef ORLICZ_CONFIG_HPP
#define ORLICZ_CONFIG_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "orlicz/compose.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/young.hpp"

namespace orlicz::config {

using json = nlohmann::json;

// "@path" reads a file, "{..." / "[..." is inline JSON, anything else is
// shorthand "kind:key=value,key=value" (numbers only). UsageError names `what`.
json load(const std::string& text, const std::string& what);

YoungFunction young_from_json(const json& j, const std::string& what = "young");
GrowthFunction phi_from_json(const json& j, const std::string& what = "phi");
// {"n": 2, "cells": [...]} or a bare cell list [{"box": [[lo, hi], ...], "value": v}, ...].
// Bounds may be numbers or the strings "inf" / "-inf".
SimpleFunction function_from_json(const json& j, const std::string& what = "f");
SearchSpec search_from_json(const json& j, const std::string& what = "search");
AffineMap map_from_json(const json& j, const std::string& what = "map");
Matrix matrix_from_json(const json& j, const std::string& what);
std::vector<DiffeoSample> samples_from_json(const json& j, const std::string& what = "samples");

// "1,4,8" -> {1, 4, 8}
std::vector<double> parse_list(const std::string& text, const std::string& what);

// Comma list, or an inclusive "lo:hi" integer range, or "lo:hi:step".
std::vector<double> parse_range(const std::string& text, const std::string& what);

json to_json(const SimpleFunction& f);
json to_json(const Box& b);
json number(double v);  // null for non-finite values

} // namespace orlicz::config

#endif
