#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(UDIST_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("config errors exit 2") {
  CHECK(run("verify --M 3 --primes 5").code == 2);
  CHECK(run("verify --M 4 --primes 5").code == 2);
  CHECK(run("verify --M 3 --primes 7 --roots 7=2").code == 2);
  CHECK(run("verify --M 3 --primes 7 --checks nope").code == 2);
  CHECK(run("verify --M 3 --primes 7 --format yaml").code == 2);
  CHECK(run("verify --M 3 --primes 7,13 --max-omega 3").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("class --M 3 --primes 7 --r 13").code == 2);
}

TEST_CASE("universal classes") {
  const Run r1 = run("class --M 3 --primes 7 --r 1");
  CHECK(r1.code == 0);
  CHECK(r1.out.rfind("[0] : 1\n", 0) == 0);
  const Run r7 = run("class --M 3 --primes 7 --r 7 --format json");
  REQUIRE(r7.code == 0);
  const auto doc = nlohmann::json::parse(r7.out);
  std::map<std::string, unsigned> coef;
  for (const auto& t : doc.at("representative")) coef[t.at("a").get<std::string>()] = t.at("coefficient").get<unsigned>();
  CHECK(coef == std::map<std::string, unsigned>{{"3/7", 1}, {"2/7", 2}, {"4/7", 1}, {"5/7", 2}});
  const Run canon = run("class --M 3 --primes 7 --r 7 --kind canonical");
  CHECK(canon.code == 0);
  CHECK(canon.out.find("coordinates (0,1) w.r.t. (cbar_1, cbar_7)") != std::string::npos);
}

TEST_CASE("basis transition matrix as CSV") {
  const Run b = run("basis --M 3 --primes 7,13 --r 91 --format csv");
  CHECK(b.code == 0);
  CHECK(b.out ==
        "g,cbar_1,cbar_7,cbar_13,cbar_91\n"
        "c_1,1,0,0,0\n"
        "c_7,0,1,0,0\n"
        "c_13,0,0,1,0\n"
        "c_91,0,0,0,1\n");
}

TEST_CASE("verify: schema, determinism, report re-rendering") {
  const std::string args = "verify --M 3 --primes 7,13 --format json";
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.out == b.out);
  // delta_containment fails by design, so the suite exits 1.
  CHECK(a.code == 1);
  const auto doc = nlohmann::json::parse(a.out);
  for (const char* key : {"config", "context", "reports", "summary"}) CHECK(doc.contains(key));
  std::size_t failed = 0;
  for (const auto& r : doc.at("reports")) {
    for (const char* key : {"name", "anchor", "params", "verdict", "details", "millis"}) CHECK(r.contains(key));
    CHECK_FALSE(r.at("anchor").get<std::string>().empty());
    if (r.at("verdict") != "pass") {
      CHECK(r.at("name") == "delta_containment");
      ++failed;
    }
  }
  CHECK(failed == doc.at("summary").at("failed").get<std::size_t>());
  CHECK(failed > 0);

  const Run passing = run("verify --M 3 --primes 7,13 --checks u_structure,universal_recursion,h0_of_K");
  CHECK(passing.code == 0);
  CHECK(passing.out.find("FAIL") == std::string::npos);

  const std::string path = "cli_report.json";
  REQUIRE(run(args + " --out " + path).code == 1);
  const Run text = run("report " + path + " --format csv");
  CHECK(text.code == 1);
  CHECK(text.out.rfind("name,anchor,params,verdict,millis,details\n", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("config file with flag overrides") {
  const std::string path = "cli_config.json";
  {
    std::ofstream out(path);
    out << R"({"M": 5, "primes": [11, 31], "checks": ["h0_dimension"]})";
  }
  const Run r = run("verify --config " + path + " --format json");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("context").at("M") == 5);
  const Run o = run("verify --config " + path + " --primes 11 --format json");
  CHECK(nlohmann::json::parse(o.out).at("context").at("primes") == nlohmann::json::array({11}));
  std::remove(path.c_str());
}
