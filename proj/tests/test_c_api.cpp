#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "lll/lll.h"

namespace {

std::string path(const char* name) { return std::string(LLL_TEST_DATA) + "/" + name; }

std::string take(char* s) {
  std::string out = s ? s : "";
  lll_string_free(s);
  return out;
}

struct Instance {
  lll_instance* ptr = nullptr;
  explicit Instance(const char* name) { REQUIRE(lll_instance_load(path(name).c_str(), &ptr) == LLL_OK); }
  ~Instance() { lll_instance_free(ptr); }
};

struct Family {
  lll_family* ptr = nullptr;
  explicit Family(const char* name) { REQUIRE(lll_family_create(name, 4, nullptr, nullptr, &ptr) == LLL_OK); }
  ~Family() { lll_family_free(ptr); }
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strlen(lll_version()) > 0);
  CHECK(std::string(lll_status_name(LLL_OK)) == "ok");
  CHECK(std::strlen(lll_status_name(LLL_ERR_CONDITION)) > 0);
}

TEST_CASE("load errors are reported") {
  lll_instance* inst = nullptr;
  CHECK(lll_instance_load(path("missing.lll").c_str(), &inst) == LLL_ERR_PARSE);
  CHECK(inst == nullptr);
  CHECK(std::strlen(lll_last_error()) > 0);
  CHECK(lll_instance_parse("vars 2\nbogus\n", &inst) == LLL_ERR_PARSE);
  CHECK(lll_instance_load(nullptr, &inst) == LLL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("check reports pass and failure") {
  Instance star("star4.lll");
  size_t vars = 0, events = 0;
  REQUIRE(lll_instance_counts(star.ptr, &vars, &events) == LLL_OK);
  CHECK(vars == 16);
  CHECK(events == 5);
  int pass = 0;
  char* report = nullptr;
  REQUIRE(lll_check(star.ptr, 1, &pass, &report) == LLL_OK);
  CHECK(pass == 1);
  CHECK(take(report).find("result pass") != std::string::npos);

  Instance m3("m3_eps.lll");
  REQUIRE(lll_check(m3.ptr, 1, &pass, &report) == LLL_OK);
  CHECK(pass == 0);
  CHECK(take(report).find("0 1/8 9/80 -1/80 FAIL") != std::string::npos);
  REQUIRE(lll_check(m3.ptr, 0, &pass, nullptr) == LLL_OK);
  CHECK(pass == 1);
}

TEST_CASE("solve fills an avoiding assignment") {
  Instance chain("chain20.lll");
  std::vector<uint32_t> values(61, 9);
  uint64_t resamples = 0;
  char* report = nullptr;
  char* log = nullptr;
  REQUIRE(lll_solve(chain.ptr, 3, 0, values.data(), values.size(), &resamples, &report, &log) == LLL_OK);
  take(report);
  // each clause (stride 3, width 4) forbids four zeros
  for (size_t c = 0; c < 20; ++c) {
    bool any = false;
    for (size_t j = 0; j < 4; ++j) any |= values[3 * c + j] != 0;
    CHECK(any);
  }
  const std::string log_text = take(log);
  if (resamples > 0) {
    char* tree = nullptr;
    REQUIRE(lll_witness_tree(chain.ptr, log_text.c_str(), 1, &tree) == LLL_OK);
    CHECK(!take(tree).empty());
  }
  CHECK(lll_witness_tree(chain.ptr, log_text.c_str(), resamples + 1, nullptr) == LLL_ERR_OUT_OF_RANGE);
}

TEST_CASE("solve budget exhaustion still fills outputs") {
  Instance chain("chain20.lll");
  std::vector<uint32_t> values(61, 9);
  uint64_t resamples = 0;
  const lll_status s = lll_solve(chain.ptr, 3, 1, values.data(), values.size(), &resamples, nullptr, nullptr);
  if (s == LLL_ERR_BUDGET) {
    CHECK(resamples == 1);
    for (auto v : values) CHECK(v <= 1);
  } else {
    CHECK(s == LLL_OK);
  }
}

TEST_CASE("condition failure on families surfaces as a status") {
  lll_family* fam = nullptr;
  CHECK(lll_family_create("uniform-chain", 3, "1/10", nullptr, &fam) == LLL_ERR_CONDITION);
  CHECK(std::string(lll_last_error()).find("FAIL") != std::string::npos);
  CHECK(lll_family_create("nonsense", 0, nullptr, nullptr, &fam) == LLL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("stages print growing prefixes") {
  Family chain("chain");
  char* text = nullptr;
  REQUIRE(lll_stages(chain.ptr, 5, 1, &text) == LLL_OK);
  const std::string s = take(text);
  CHECK(s.find("prefix 0 ") != std::string::npos);
  CHECK(s.find("prefix 5 ") != std::string::npos);
}

TEST_CASE("exact extraction through the C interface") {
  Family none("none");
  lll_extract_options opts;
  lll_extract_options_default(&opts);
  std::vector<uint32_t> values(5, 7);
  char* report = nullptr;
  REQUIRE(lll_extract(none.ptr, 5, &opts, values.data(), values.size(), &report) == LLL_OK);
  CHECK(values == std::vector<uint32_t>(5, 0));
  CHECK(take(report).find("prefix 4 0 0 0 0 0") != std::string::npos);

  Family chain("chain");
  opts.depth = 2;
  CHECK(lll_extract(chain.ptr, 7, &opts, nullptr, 0, nullptr) == LLL_ERR_THRESHOLD);
  CHECK(std::string(lll_last_error()).find("achieved") != std::string::npos);
}

TEST_CASE("monte carlo extraction is deterministic in the seed") {
  Family chain("chain");
  lll_extract_options opts;
  lll_extract_options_default(&opts);
  opts.mode = LLL_EXTRACT_MONTE_CARLO;
  opts.replicas = 200;
  opts.threads = 1;
  std::vector<uint32_t> a(4), b(4);
  REQUIRE(lll_extract(chain.ptr, 4, &opts, a.data(), a.size(), nullptr) == LLL_OK);
  REQUIRE(lll_extract(chain.ptr, 4, &opts, b.data(), b.size(), nullptr) == LLL_OK);
  CHECK(a == b);
}

TEST_CASE("avoidance through the C interface") {
  lll_avoid_options opts;
  lll_avoid_options_default(&opts);
  opts.replicas = 4;
  int ok = 0;
  uint64_t n = 0;
  char* report = nullptr;
  REQUIRE(lll_avoid_1d("zero-runs", 40, &opts, &ok, &n, &report) == LLL_OK);
  CHECK(ok == 1);
  CHECK(n == 62);
  const std::string text = take(report);
  CHECK(text.find("word 0 ") != std::string::npos);
  REQUIRE(lll_avoid_2d("zero-rects", 1, &opts, &ok, &n, nullptr) == LLL_OK);
  CHECK(ok == 1);
  opts.alpha = "2";
  CHECK(lll_avoid_1d("zero-runs", 4, &opts, &ok, &n, nullptr) == LLL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("threshold and stats") {
  uint64_t n = 0;
  REQUIRE(lll_min_clause_size("1/2", "0", &n) == LLL_OK);
  CHECK(n == 22);
  CHECK(lll_min_clause_size("x", "0", &n) != LLL_OK);

  Instance star("star4.lll");
  lll_stats_options opts;
  lll_stats_options_default(&opts);
  opts.runs = 20;
  char* csv = nullptr;
  REQUIRE(lll_stats(star.ptr, &opts, &csv) == LLL_OK);
  const std::string text = take(csv);
  CHECK(text.find("\nsection,key,runs,mean,ci,bound,n,ok\n") != std::string::npos);
}
