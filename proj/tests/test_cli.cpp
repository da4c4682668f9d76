#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + STEINEVT_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("bound for exponential maxima") {
  const Run r = run("bound --law exponential --n 100");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["total"].get<double>() == doctest::Approx(std::log(100.0) / 100 + 0.01).epsilon(1e-14));
  CHECK(j["terms"].size() == 2);
  CHECK(j["terms"][0].contains("ref"));
}

TEST_CASE("CSV output of a bound") {
  const Run r = run("bound --law pareto --alpha 2 --n 1000 --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\n') != std::string::npos);
  CHECK(r.out.find("{") == std::string::npos);
}

TEST_CASE("Archimedean bound and its gate") {
  const Run ok = run("bound --arch 4 --theta 1.5 --s sqrtlog --n 50");
  REQUIRE(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["meta"]["min_feasible_n"].get<double>() == 8.0);
  CHECK(run("bound --arch 4 --theta 1.5 --s sqrtlog --n 7").code == 4);
  CHECK(run("bound --arch 9 --theta 1.5 --s 1 --n 50").code == 3);
  CHECK(run("bound --arch 4 --theta 1.5 --n 50").code == 3);
}

TEST_CASE("Marshall-Olkin geometric ledger") {
  const Run r = run("bound --mogeo --gamma 1 --delta 1 --p11 0.01 --u -1");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["terms"].size() == 3);
  CHECK(j["terms"][0]["stage"] == "lattice-poisson");
  CHECK(j["terms"][2]["stage"] == "continuous-to-limit");
  CHECK(run("bound --mogeo --gamma 1 --delta 1 --p11 0.01 --u -5 --n 10").code == 4);
}

TEST_CASE("configuration errors exit with 3") {
  CHECK(run("bound --law weibull --n 10").code == 3);
  CHECK(run("bound --law exponential --n 10 --bogus").code == 3);
  CHECK(run("bound").code == 3);
  CHECK(run("table nonsense").code == 3);
  CHECK(run("bound --law exponential --n 100 --format xml").code == 3);
}

TEST_CASE("stochastic commands need a seed, the flag wins over the environment") {
  CHECK(run("simulate copula --count 5").code == 3);
  const Run env = run("simulate copula --count 5", "STEINEVT_SEED=7");
  const Run flag = run("simulate copula --count 5 --seed 7");
  const Run both = run("simulate copula --count 5 --seed 7", "STEINEVT_SEED=8");
  REQUIRE(env.code == 0);
  CHECK(env.out == flag.out);
  CHECK(both.out == flag.out);
  CHECK(run("simulate copula --count 5 --seed 8").out != flag.out);
}

TEST_CASE("reruns are byte-identical") {
  for (const std::string args : {"simulate mppe --law exponential --n 1000 --u loglog --seed 3",
                                 "simulate imm-death --lambda 1 --horizon 10 --seed 3",
                                 "simulate copula --copula mo --alpha 0.3 --beta 0.6 --count 200 --seed 3",
                                 "verify imm-death --lambda 1 --reps 20000 --seed 3"}) {
    const Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("output file") {
  const std::string path = "steinevt_cli_test_out.json";
  std::remove(path.c_str());
  REQUIRE(run("bound --law uniform --n 25 --out " + path).code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["name"] == "max-uniform-a");
  std::remove(path.c_str());
}

TEST_CASE("verify and table commands") {
  const Run bp = run("verify binomial");
  CHECK(bp.code == 0);
  CHECK(bp.out.rfind("n,p,exact_dtv,barbour_hall,le_cam,margin,pass\n", 0) == 0);
  CHECK(run("verify maxima --law cauchy --n 25,100").code == 0);
  const Run t = run("table archimedean --theta 1.5");
  CHECK(t.code == 0);
  CHECK(t.out.rfind("family,theta,h0,r0,H,W,K,", 0) == 0);
  const Run td = run("table tail-dependence --theta 2 --format json");
  REQUIRE(td.code == 0);
  CHECK(nlohmann::json::parse(td.out)["rows"].size() == 6);
}
