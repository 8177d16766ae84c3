#pragma once

#include <string>
#include <vector>

#include "sbern/estimators.hpp"
#include "sbern/simplex.hpp"

namespace sbern {

/// Dataset CSV: one observation per row, d numeric columns, optional header
/// row (detected: any cell of the first row that does not parse as a number).
/// Every row is validated against the simplex constraints on construction.
dataset parse_dataset_csv(const std::string& text);
dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const dataset& data, const std::string& path);

/// Model dumps.  Density: {"kind":"density","m":..,"n":..,"d":..,
/// "bins":[{"k":[..],"p":..,"count":..}]} ("count" optional on load,
/// reconstructed from p*n).  CDF: {"kind":"cdf","m":..,"n":..,"d":..,
/// "points":[[..],..]} (the dataset itself; lattice values rebuild on load).
/// A dump without "kind" is classified by which payload field it carries.
std::string density_model_to_json(const density_model& model);
density_model density_model_from_json(const std::string& text);
std::string cdf_model_to_json(const cdf_model& model);
cdf_model cdf_model_from_json(const std::string& text);

enum class model_file_kind { cdf, density };
model_file_kind detect_model_kind(const std::string& text);

/// Grid-evaluation table: header x_1,..,x_d,value then one row per node.
std::string grid_eval_csv(const std::vector<double>& nodes, int d,
                          const std::vector<double>& values);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sbern
