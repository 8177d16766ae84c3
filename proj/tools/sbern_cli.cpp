// Command-line front end: every numeric operation is delegated to the shared
// library through the C interface in sbern.h; this file only parses flags,
// moves bytes, and maps failures onto the documented exit codes
// (0 success, 1 computational failure, 2 usage, 3 verification failure).
#include <CLI11.hpp>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sbern.h"

namespace {

constexpr const char* kSeedEnvVar = "SBERN_SEED";
constexpr std::uint64_t kDefaultSeed = 12345;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int emit_error(int exit_code, int status, const std::string& message) {
  std::cerr << "{\"error\":{\"exit\":" << exit_code << ",\"status\":" << status
            << ",\"message\":\"" << json_escape(message) << "\"}}\n";
  return exit_code;
}

int library_failure(sbern_status st) {
  return emit_error(1, static_cast<int>(st), sbern_last_error());
}

struct string_guard {
  char* p = nullptr;
  ~string_guard() { sbern_free_string(p); }
};

bool write_output(const std::string& path, const std::string& content, int& exit_code) {
  if (path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return true;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) {
    exit_code = emit_error(1, SBERN_EIO, "cannot write output file: " + path);
    return false;
  }
  return true;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag, bool& ok) {
  ok = true;
  if (seed_opt->count() > 0) return seed_flag;
  if (const char* env = std::getenv(kSeedEnvVar)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      ok = false;
      return 0;
    }
    return static_cast<std::uint64_t>(v);
  }
  return kDefaultSeed;
}

bool parse_point(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::istringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) return false;
    } catch (...) {
      return false;
    }
  }
  return !out.empty();
}

using dataset_ptr = std::unique_ptr<sbern_dataset, decltype(&sbern_dataset_free)>;

int load_dataset(const std::string& path, dataset_ptr& out) {
  sbern_dataset* raw = nullptr;
  const sbern_status st = sbern_dataset_from_file(path.c_str(), &raw);
  if (st != SBERN_OK) return library_failure(st);
  out.reset(raw);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bernstein estimators on the unit simplex: fit CDF/density models, "
      "evaluate them, select the order by cross-validation, run the "
      "verification sweep, and run Monte Carlo studies."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--workers", workers, "worker thread budget for sweeps and studies")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::uint64_t seed_flag = kDefaultSeed;
  auto* seed_opt =
      app.add_option("--seed", seed_flag,
                     "base seed; when absent the " + std::string(kSeedEnvVar) +
                         " environment variable is consulted, then the default 12345");

  // fit-cdf / fit-density
  std::string fit_data, fit_out;
  int fit_m = 0;
  auto add_fit = [&](const char* name, const char* blurb) {
    auto* cmd = app.add_subcommand(name, blurb);
    cmd->add_option("--data", fit_data, "dataset CSV path")->required();
    cmd->add_option("--m", fit_m, "polynomial order (m >= 1)")
        ->required()
        ->check(CLI::Range(1, 1 << 30));
    cmd->add_option("--out", fit_out, "output path for the model JSON (default stdout)");
    return cmd;
  };
  auto* cmd_fit_cdf = add_fit("fit-cdf", "fit the order-m smoothed empirical CDF");
  auto* cmd_fit_density = add_fit("fit-density", "fit the order-m histogram-weighted density");

  // eval
  std::string eval_model, eval_out, eval_at;
  int eval_grid = 0;
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a fitted model dump");
  cmd_eval->add_option("--model", eval_model, "model JSON path")->required();
  cmd_eval->add_option("--grid", eval_grid,
                       "interior midpoint grid resolution (CSV output)")
      ->check(CLI::PositiveNumber);
  cmd_eval->add_option("--at", eval_at, "single comma-separated point (JSON output)");
  cmd_eval->add_option("--out", eval_out, "output path (default stdout)");

  // select-bandwidth
  std::string sel_data, sel_method = "lscv", sel_out;
  long sel_min = 0, sel_max = 0;
  int sel_count = 24;
  auto* cmd_sel = app.add_subcommand("select-bandwidth",
                                     "score a candidate order grid by cross-validation");
  cmd_sel->add_option("--data", sel_data, "dataset CSV path")->required();
  cmd_sel->add_option("--method", sel_method, "lscv (least-squares) or lcv (likelihood)")
      ->check(CLI::IsMember({"lscv", "lcv"}));
  cmd_sel->add_option("--m-min", sel_min, "smallest candidate order")->check(CLI::PositiveNumber);
  cmd_sel->add_option("--m-max", sel_max, "largest candidate order")->check(CLI::PositiveNumber);
  cmd_sel->add_option("--m-count", sel_count, "number of geometric grid points")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_sel->add_option("--out", sel_out, "output path for the selection JSON (default stdout)");

  // verify
  std::string verify_out;
  auto* cmd_verify = app.add_subcommand("verify",
                                        "run the identity/lemma verification sweep");
  cmd_verify->add_option("--out", verify_out, "output path for the JSON report (default stdout)");

  // study
  std::string study_config, study_out;
  bool study_csv = false;
  auto* cmd_study = app.add_subcommand("study", "run a Monte Carlo study from a JSON config");
  cmd_study->add_option("--config", study_config, "StudyConfig JSON path")->required();
  cmd_study->add_flag("--csv", study_csv, "emit the flat CSV table instead of JSON");
  cmd_study->add_option("--out", study_out, "output path (default stdout)");

  // accept the global --workers/--seed flags after the subcommand as well
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error(2, SBERN_EINVAL, e.what());
  }

  bool seed_ok = true;
  const std::uint64_t seed = resolve_seed(seed_opt, seed_flag, seed_ok);
  if (!seed_ok) {
    return emit_error(2, SBERN_EINVAL,
                      std::string(kSeedEnvVar) + " must be an unsigned integer");
  }

  int exit_code = 0;

  if (cmd_fit_cdf->parsed() || cmd_fit_density->parsed()) {
    dataset_ptr data(nullptr, sbern_dataset_free);
    if (int rc = load_dataset(fit_data, data)) return rc;
    string_guard json;
    if (cmd_fit_cdf->parsed()) {
      sbern_cdf_model* model = nullptr;
      if (sbern_status st = sbern_fit_cdf(data.get(), fit_m, &model); st != SBERN_OK) {
        return library_failure(st);
      }
      const sbern_status st = sbern_cdf_model_to_json(model, &json.p);
      sbern_cdf_model_free(model);
      if (st != SBERN_OK) return library_failure(st);
    } else {
      sbern_density_model* model = nullptr;
      if (sbern_status st = sbern_fit_density(data.get(), fit_m, &model); st != SBERN_OK) {
        return library_failure(st);
      }
      const sbern_status st = sbern_density_model_to_json(model, &json.p);
      sbern_density_model_free(model);
      if (st != SBERN_OK) return library_failure(st);
    }
    write_output(fit_out, json.p, exit_code);
    return exit_code;
  }

  if (cmd_eval->parsed()) {
    if ((eval_grid > 0) == !eval_at.empty()) {
      return emit_error(2, SBERN_EINVAL, "eval requires exactly one of --grid or --at");
    }
    std::ifstream in(eval_model, std::ios::binary);
    if (!in) return emit_error(1, SBERN_EIO, "cannot open model file: " + eval_model);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    int kind = 0;
    if (sbern_status st = sbern_model_file_kind(text.c_str(), &kind); st != SBERN_OK) {
      return library_failure(st);
    }

    std::vector<double> at;
    if (!eval_at.empty() && !parse_point(eval_at, at)) {
      return emit_error(2, SBERN_EINVAL, "--at expects comma-separated numbers");
    }

    std::string payload;
    if (kind == 0) {
      sbern_cdf_model* model = nullptr;
      if (sbern_status st = sbern_cdf_model_from_json(text.c_str(), &model); st != SBERN_OK) {
        return library_failure(st);
      }
      std::unique_ptr<sbern_cdf_model, decltype(&sbern_cdf_model_free)> guard(
          model, sbern_cdf_model_free);
      if (eval_grid > 0) {
        string_guard csv;
        if (sbern_status st = sbern_cdf_eval_grid_csv(model, eval_grid, workers, &csv.p);
            st != SBERN_OK) {
          return library_failure(st);
        }
        payload = csv.p;
      } else {
        double value = 0.0;
        if (sbern_status st =
                sbern_cdf_eval(model, at.data(), static_cast<int>(at.size()), &value);
            st != SBERN_OK) {
          return library_failure(st);
        }
        std::ostringstream os;
        os.precision(17);
        os << "{\"x\":[";
        for (std::size_t i = 0; i < at.size(); ++i) os << (i ? "," : "") << at[i];
        os << "],\"value\":" << value << "}";
        payload = os.str();
      }
    } else {
      sbern_density_model* model = nullptr;
      if (sbern_status st = sbern_density_model_from_json(text.c_str(), &model);
          st != SBERN_OK) {
        return library_failure(st);
      }
      std::unique_ptr<sbern_density_model, decltype(&sbern_density_model_free)> guard(
          model, sbern_density_model_free);
      if (eval_grid > 0) {
        string_guard csv;
        if (sbern_status st = sbern_density_eval_grid_csv(model, eval_grid, workers, &csv.p);
            st != SBERN_OK) {
          return library_failure(st);
        }
        payload = csv.p;
      } else {
        double value = 0.0;
        if (sbern_status st =
                sbern_density_eval(model, at.data(), static_cast<int>(at.size()), &value);
            st != SBERN_OK) {
          return library_failure(st);
        }
        std::ostringstream os;
        os.precision(17);
        os << "{\"x\":[";
        for (std::size_t i = 0; i < at.size(); ++i) os << (i ? "," : "") << at[i];
        os << "],\"value\":" << value << "}";
        payload = os.str();
      }
    }
    write_output(eval_out, payload, exit_code);
    return exit_code;
  }

  if (cmd_sel->parsed()) {
    if ((sel_min > 0) != (sel_max > 0)) {
      return emit_error(2, SBERN_EINVAL, "--m-min and --m-max must be given together");
    }
    if (sel_min > 0 && sel_max < sel_min) {
      return emit_error(2, SBERN_EINVAL, "--m-max must be >= --m-min");
    }
    dataset_ptr data(nullptr, sbern_dataset_free);
    if (int rc = load_dataset(sel_data, data)) return rc;

    std::vector<long> grid;
    if (sel_min > 0) {
      grid.resize(static_cast<std::size_t>(sel_count));
      int len = 0;
      if (sbern_status st =
              sbern_bandwidth_grid(sbern_dataset_size(data.get()), sbern_dataset_dim(data.get()),
                                   sel_min, sel_max, sel_count, grid.data(),
                                   static_cast<int>(grid.size()), &len);
          st != SBERN_OK) {
        return library_failure(st);
      }
      grid.resize(static_cast<std::size_t>(len));
    }

    string_guard json;
    if (sbern_status st = sbern_select_bandwidth(data.get(), sel_method.c_str(),
                                                 grid.empty() ? nullptr : grid.data(),
                                                 static_cast<int>(grid.size()), workers, &json.p);
        st != SBERN_OK) {
      return library_failure(st);
    }
    write_output(sel_out, json.p, exit_code);
    return exit_code;
  }

  if (cmd_verify->parsed()) {
    string_guard json;
    int all_pass = 0;
    if (sbern_status st = sbern_verify_run(seed, workers, &json.p, &all_pass); st != SBERN_OK) {
      return library_failure(st);
    }
    if (!write_output(verify_out, json.p, exit_code)) return exit_code;
    if (!all_pass) {
      return emit_error(3, SBERN_EVERIFY, "verification sweep has failing checks");
    }
    return 0;
  }

  if (cmd_study->parsed()) {
    std::ifstream in(study_config, std::ios::binary);
    if (!in) return emit_error(1, SBERN_EIO, "cannot open study config: " + study_config);
    std::ostringstream ss;
    ss << in.rdbuf();
    string_guard json, csv;
    if (sbern_status st = sbern_study_run(ss.str().c_str(), workers,
                                          study_csv ? nullptr : &json.p,
                                          study_csv ? &csv.p : nullptr);
        st != SBERN_OK) {
      return library_failure(st);
    }
    write_output(study_out, study_csv ? csv.p : json.p, exit_code);
    return exit_code;
  }

  return emit_error(2, SBERN_EINVAL, "no subcommand given");
}
