#pragma once

#include <span>
#include <string>

#include "cir/experiments.hpp"

namespace cir {

enum class OutputFormat { csv, json };

// CSV with the fixed header experiment,n,C,t,metric,value,bound,decision.
// Numbers carry 17 significant digits so every double round-trips exactly;
// empty cells stay empty. Ends with a single newline. Non-finite numbers
// and malformed labels raise IoFailure: reports must be plottable as-is.
std::string to_csv(std::span<const ResultRow> rows);

// Same rows as a JSON array of objects, one key per CSV column, null for
// empty cells. Digits and row order match the CSV exactly.
std::string to_json(std::span<const ResultRow> rows);

void write_results(std::span<const ResultRow> rows, const std::string& path,
                   OutputFormat format);

}  // namespace cir
