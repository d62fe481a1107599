#pragma once

#include <string>
#include <vector>

#include "depbounds/bounds.hpp"
#include "depbounds/functionals.hpp"
#include "depbounds/optimizer.hpp"

namespace depbounds {

// Shortest-faithful decimal form, 17 significant digits, '.' separator.
std::string format_double(double v);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(const std::string& name);

// Flat record: value, se, method, effort, beta, d.
std::string estimate_csv(const Estimate& e, double beta, int d);
std::string estimate_json(const Estimate& e, double beta, int d);

// One bound per row: side, name, value, sharp flag, derivation.
std::string bounds_report_csv(const BoundsReport& rep);
std::string bounds_report_json(const BoundsReport& rep);

// restart, iterations, final objective value.
std::string trace_csv(const SearchResult& res);

// x,y[,z] point set.
std::string points_csv(const std::vector<std::vector<double>>& pts);

// Writes the whole content at once (temp file + rename), so failed runs
// never leave partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace depbounds
