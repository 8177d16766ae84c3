#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "sbern/common.hpp"
#include "sbern/estimators.hpp"
#include "sbern/io.hpp"
#include "sbern/mixture.hpp"
#include "sbern/rng.hpp"

using namespace sbern;

namespace {
struct temp_file {
  std::string path;
  explicit temp_file(const std::string& name) : path("/tmp/sbern_test_" + name) {}
  ~temp_file() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("dataset csv parsing: headers, line endings, blanks") {
  auto plain = parse_dataset_csv("0.1,0.2\n0.3,0.4\n");
  CHECK(plain.dim() == 2);
  CHECK(plain.size() == 2);
  CHECK(plain.row(1)[1] == 0.4);

  auto header = parse_dataset_csv("x_1,x_2\n0.1,0.2\n0.3,0.4\n");
  CHECK(header.size() == 2);
  CHECK(header.row(0)[0] == 0.1);

  auto crlf = parse_dataset_csv("x\r\n0.25\r\n0.75\r\n");
  CHECK(crlf.dim() == 1);
  CHECK(crlf.size() == 2);
  CHECK(crlf.row(1)[0] == 0.75);

  auto blanks = parse_dataset_csv("0.2,0.2\n\n0.1,0.1\n\n");
  CHECK(blanks.size() == 2);

  // scientific notation and leading whitespace are ordinary numerics
  auto sci = parse_dataset_csv(" 2.5e-1 , 1e-1 \n0.5,0.25\n");
  CHECK(sci.row(0)[0] == 0.25);
}

TEST_CASE("dataset csv parsing failures carry the io error code") {
  for (const char* text : {
           "",                      // nothing to parse
           "x_1,x_2\n",             // header only
           "0.1,0.2\n0.3\n",        // ragged row
           "0.1,0.2\n0.3,abc\n",    // non-numeric cell past the header row
           "0.1,0.2\n0.9,0.9\n",    // off-simplex row
       }) {
    try {
      parse_dataset_csv(text);
      FAIL_CHECK("expected a parse failure for: ", text);
    } catch (const error& e) {
      CHECK((e.code() == errc::io_error || e.code() == errc::invalid_argument));
    }
  }
}

TEST_CASE("dataset csv file round trip") {
  rng gen = rng::for_stream(6060, 0);
  auto data = sample_mixture(mixture_spec::uniform(2), 25, gen);
  temp_file f("roundtrip.csv");
  write_dataset_csv(data, f.path);
  auto back = read_dataset_csv(f.path);
  REQUIRE(back.dim() == 2);
  REQUIRE(back.size() == 25);
  for (long i = 0; i < 25; ++i) {
    CHECK(back.row(i)[0] == data.row(i)[0]);  // %.17g preserves doubles exactly
    CHECK(back.row(i)[1] == data.row(i)[1]);
  }
  CHECK(read_text_file(f.path).rfind("x_1,x_2\n", 0) == 0);
  CHECK_THROWS_AS(read_dataset_csv("/nonexistent/path.csv"), error);
}

TEST_CASE("density model json round trip preserves evaluations") {
  rng gen = rng::for_stream(6060, 1);
  auto data = sample_mixture(mixture_spec::uniform(2), 40, gen);
  auto model = fit_density(data, 6);
  const std::string dump = density_model_to_json(model);
  CHECK(dump.find("\"kind\": \"density\"") != std::string::npos);  // pretty-printed dump
  CHECK(dump.find("\"bins\"") != std::string::npos);

  auto back = density_model_from_json(dump);
  CHECK(back.order() == 6);
  CHECK(back.dim() == 2);
  CHECK(back.sample_size() == 40);
  CHECK(back.occupied() == model.occupied());
  for (double a : {0.1, 0.3, 0.55}) {
    const std::vector<double> x{a, 0.25};
    CHECK(back(x) == model(x));
  }
}

TEST_CASE("density model json tolerates a missing count field") {
  // counts reconstruct from p * n on load
  const std::string text = R"({"kind":"density","m":2,"n":4,"d":1,)"
                           R"("bins":[{"k":[0],"p":0.25},{"k":[1],"p":0.75}]})";
  auto model = density_model_from_json(text);
  CHECK(model.occupied() == 2);
  auto bins = model.bins();
  CHECK(bins[0].count == 1);
  CHECK(bins[1].count == 3);

  // inconsistent totals are rejected
  const std::string bad = R"({"kind":"density","m":2,"n":5,"d":1,)"
                          R"("bins":[{"k":[0],"count":1,"p":0.5},{"k":[1],"count":1,"p":0.5}]})";
  CHECK_THROWS_AS(density_model_from_json(bad), error);
}

TEST_CASE("cdf model json round trip preserves evaluations") {
  rng gen = rng::for_stream(6060, 2);
  auto data = sample_mixture(mixture_spec::uniform(1), 30, gen);
  auto model = fit_cdf(data, 9);
  const std::string dump = cdf_model_to_json(model);
  CHECK(dump.find("\"kind\": \"cdf\"") != std::string::npos);  // pretty-printed dump
  CHECK(dump.find("\"points\"") != std::string::npos);

  auto back = cdf_model_from_json(dump);
  CHECK(back.order() == 9);
  CHECK(back.sample_size() == 30);
  for (double a : {0.15, 0.4, 0.9}) {
    const std::array<double, 1> x{a};
    CHECK(back(x) == model(x));
  }
}

TEST_CASE("model kind detection, with and without the kind tag") {
  auto data = dataset({0.2, 0.6, 0.9}, 1);
  const std::string cdump = cdf_model_to_json(fit_cdf(data, 3));
  const std::string ddump = density_model_to_json(fit_density(data, 3));
  CHECK(detect_model_kind(cdump) == model_file_kind::cdf);
  CHECK(detect_model_kind(ddump) == model_file_kind::density);
  // payload-based classification when the tag is absent
  CHECK(detect_model_kind(R"({"m":2,"n":3,"d":1,"points":[[0.5]]})") ==
        model_file_kind::cdf);
  CHECK(detect_model_kind(R"({"m":2,"n":3,"d":1,"bins":[{"k":[0],"p":1.0}]})") ==
        model_file_kind::density);
  CHECK_THROWS_AS(detect_model_kind(R"({"m":2})"), error);
  CHECK_THROWS_AS(detect_model_kind("nope"), error);
  // loading through the wrong-kind reader fails cleanly
  CHECK_THROWS_AS(cdf_model_from_json(ddump), error);
  CHECK_THROWS_AS(density_model_from_json(cdump), error);
}

TEST_CASE("grid evaluation csv layout") {
  const std::vector<double> nodes{0.25, 0.25, 0.5, 0.25};
  const std::vector<double> values{1.5, 2.5};
  const std::string csv = grid_eval_csv(nodes, 2, values);
  CHECK(csv.rfind("x_1,x_2,value\n", 0) == 0);
  CHECK(csv.find("0.25,0.25,1.5\n") != std::string::npos);
  CHECK(csv.find("0.5,0.25,2.5\n") != std::string::npos);
  CHECK_THROWS_AS(grid_eval_csv(nodes, 2, std::vector<double>{1.0}), error);
}

TEST_CASE("text file round trip") {
  temp_file f("text.txt");
  write_text_file(f.path, "hello\nworld\n");
  CHECK(read_text_file(f.path) == "hello\nworld\n");
  CHECK_THROWS_AS(read_text_file("/nonexistent/file.txt"), error);
}
