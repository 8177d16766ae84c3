#include "sbern/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sbern/common.hpp"

namespace sbern {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* b = cell.data();
  const char* e = b + cell.size();
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

dataset parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> flat;
  int d = 0;
  long line_no = 0, data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) numeric = numeric && parse_double(cells[i], row[i]);
    if (!numeric) {
      if (data_rows == 0 && d == 0) continue;  // header row
      raise(errc::io_error,
            "dataset CSV: non-numeric cell on line " + std::to_string(line_no));
    }
    if (d == 0) {
      d = static_cast<int>(row.size());
      if (d < 1) raise(errc::io_error, "dataset CSV: empty first data row");
    } else if (static_cast<int>(row.size()) != d) {
      raise(errc::io_error, "dataset CSV: line " + std::to_string(line_no) + " has " +
                                std::to_string(row.size()) + " columns, expected " +
                                std::to_string(d));
    }
    flat.insert(flat.end(), row.begin(), row.end());
    ++data_rows;
  }
  if (data_rows == 0) raise(errc::io_error, "dataset CSV: no data rows");
  return dataset(std::move(flat), d);
}

dataset read_dataset_csv(const std::string& path) { return parse_dataset_csv(read_text_file(path)); }

void write_dataset_csv(const dataset& data, const std::string& path) {
  std::ostringstream os;
  os.precision(17);
  const int d = data.dim();
  for (int i = 0; i < d; ++i) os << (i ? "," : "") << "x_" << (i + 1);
  os << '\n';
  for (long r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    for (int i = 0; i < d; ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  write_text_file(path, os.str());
}

std::string density_model_to_json(const density_model& model) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : model.bins()) {
    bins.push_back({{"k", b.k}, {"p", b.p}, {"count", b.count}});
  }
  nlohmann::json j{{"kind", "density"},
                   {"m", model.order()},
                   {"n", model.sample_size()},
                   {"d", model.dim()},
                   {"bins", bins}};
  return j.dump(2);
}

namespace {

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    raise(errc::io_error, std::string(what) + ": invalid JSON: " + e.what());
  }
}

}  // namespace

density_model density_model_from_json(const std::string& text) {
  const nlohmann::json j = parse_json(text, "density model");
  try {
    if (j.contains("kind") && j.at("kind").get<std::string>() != "density") {
      raise(errc::io_error, "density model: dump is not a density model");
    }
    const int m = j.at("m").get<int>();
    const int d = j.at("d").get<int>();
    const long n = j.at("n").get<long>();
    std::vector<density_model::bin> bins;
    for (const auto& b : j.at("bins")) {
      density_model::bin out;
      out.k = b.at("k").get<std::vector<int>>();
      out.p = b.at("p").get<double>();
      out.count = b.contains("count") ? b.at("count").get<long>()
                                      : std::lround(out.p * static_cast<double>(n));
      bins.push_back(std::move(out));
    }
    return density_model::from_bins(m, d, n, std::move(bins));
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    raise(errc::io_error, std::string("density model: ") + e.what());
  }
}

std::string cdf_model_to_json(const cdf_model& model) {
  nlohmann::json points = nlohmann::json::array();
  for (long r = 0; r < model.sample_size(); ++r) {
    const auto row = model.data().row(r);
    points.push_back(std::vector<double>(row.begin(), row.end()));
  }
  nlohmann::json j{{"kind", "cdf"},
                   {"m", model.order()},
                   {"n", model.sample_size()},
                   {"d", model.dim()},
                   {"points", points}};
  return j.dump(2);
}

cdf_model cdf_model_from_json(const std::string& text) {
  const nlohmann::json j = parse_json(text, "cdf model");
  try {
    if (j.contains("kind") && j.at("kind").get<std::string>() != "cdf") {
      raise(errc::io_error, "cdf model: dump is not a cdf model");
    }
    const int m = j.at("m").get<int>();
    const int d = j.at("d").get<int>();
    const long n = j.at("n").get<long>();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * d);
    for (const auto& p : j.at("points")) {
      const auto row = p.get<std::vector<double>>();
      if (static_cast<int>(row.size()) != d) {
        raise(errc::io_error, "cdf model: point dimension mismatch");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    if (static_cast<long>(flat.size()) != n * d) {
      raise(errc::io_error, "cdf model: point count disagrees with n");
    }
    return cdf_model(dataset(std::move(flat), d), m);
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    raise(errc::io_error, std::string("cdf model: ") + e.what());
  }
}

model_file_kind detect_model_kind(const std::string& text) {
  const nlohmann::json j = parse_json(text, "model");
  if (j.contains("kind")) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "cdf") return model_file_kind::cdf;
    if (k == "density") return model_file_kind::density;
    raise(errc::io_error, "model: unknown kind '" + k + "'");
  }
  if (j.contains("bins")) return model_file_kind::density;
  if (j.contains("points")) return model_file_kind::cdf;
  raise(errc::io_error, "model: neither bins nor points present");
}

std::string grid_eval_csv(const std::vector<double>& nodes, int d,
                          const std::vector<double>& values) {
  if (d < 1 || nodes.size() != values.size() * static_cast<std::size_t>(d)) {
    raise(errc::invalid_argument, "grid_eval_csv: node/value shape mismatch");
  }
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < d; ++i) os << "x_" << (i + 1) << ',';
  os << "value\n";
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (int i = 0; i < d; ++i) os << nodes[r * d + i] << ',';
    os << values[r] << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open file for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) raise(errc::io_error, "read failed: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::io_error, "cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) raise(errc::io_error, "write failed: " + path);
}

}  // namespace sbern
