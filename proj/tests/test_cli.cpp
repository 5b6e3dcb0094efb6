#include <cstdlib>
#include <fstream>
#include <sstream>

#include "acr/cli.hpp"
#include "acr/dataset.hpp"
#include "acr/report.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace acr;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "acrfit");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("simulate") {
  const auto dir = oracle::temp_dir("cli_simulate");
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  auto r = run({"simulate", "--model", "maxentropy", "--params", "3,0.5", "--n", "1000000", "--out", a, "--seed", "1"});
  REQUIRE(r.code == 0);
  const auto d = read_counts_csv(a);
  REQUIRE(d.stimuli.size() == 1);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(d.stimuli[0].counts[k] / 1e6 - 0.2) < 0.005);

  run({"simulate", "--model", "gsd", "--params", "2.5,0.7", "--n", "50", "--stimuli", "20", "--out", a, "--seed", "9"});
  run({"simulate", "--model", "gsd", "--params", "2.5,0.7", "--n", "50", "--stimuli", "20", "--out", b, "--seed", "9"});
  CHECK(slurp(a) == slurp(b));
  CHECK(lines(a).size() == 21);

  CHECK(run({"simulate", "--model", "gsd", "--params", "2.5,1.7", "--n", "50", "--out", a, "--seed", "1"}).code == 2);
  CHECK(run({"simulate", "--model", "normal", "--params", "3", "--n", "50", "--out", a, "--seed", "1"}).code == 2);
  CHECK(run({"simulate", "--model", "normal", "--params", "3,1", "--n", "0", "--out", a}).code == 2);
  CHECK(run({"simulate", "--model", "normal", "--params", "3,1", "--n", "10", "--out",
             (dir / "missing" / "x.csv").string()})
            .code == 1);
}

TEST_CASE("fit") {
  const auto dir = oracle::temp_dir("cli_fit");
  const auto data = (dir / "d.csv").string();
  REQUIRE(run({"simulate", "--model", "beta", "--params", "3,2", "--n", "40", "--stimuli", "5", "--out", data,
               "--seed", "2"})
              .code == 0);
  auto r = run({"fit", "--data", data, "--model", "logit-logistic", "--out", (dir / "f.csv").string()});
  CHECK(r.code == 0);
  CHECK(lines(dir / "f.csv").size() == 6);
  CHECK(lines(dir / "f.csv")[1].rfind("s1,logit-logistic,", 0) == 0);

  r = run({"fit", "--data", data, "--model", "weibull", "--out", (dir / "f.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("logit-logistic") != std::string::npos);
  CHECK(r.err.find("maxentropy") != std::string::npos);

  r = run({"fit", "--data", (dir / "nope.csv").string(), "--model", "gsd", "--out", (dir / "f.csv").string()});
  CHECK(r.code == 1);
  CHECK(run({"fit", "--model", "gsd", "--out", (dir / "f.csv").string()}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  std::ofstream(dir / "bad.csv") << "id,c1,c2\na,1,-2\n";
  CHECK(run({"fit", "--data", (dir / "bad.csv").string(), "--model", "gsd", "--out", (dir / "f.csv").string()}).code ==
        2);
}

TEST_CASE("gof") {
  const auto dir = oracle::temp_dir("cli_gof");
  const auto data = (dir / "d.csv").string();
  run({"simulate", "--model", "normal", "--params", "3.2,0.9", "--n", "30", "--stimuli", "40", "--out", data, "--seed",
       "3"});
  const auto out = (dir / "g.csv").string(), out2 = (dir / "g2.csv").string();
  REQUIRE(run({"gof", "--data", data, "--models", "normal,gsd", "--boot", "200", "--out", out, "--seed", "5"}).code ==
          0);
  REQUIRE(run({"gof", "--data", data, "--models", "normal,gsd", "--boot", "200", "--out", out2, "--seed", "5"}).code ==
          0);
  CHECK(slurp(out) == slurp(out2));
  const auto rows = lines(out);
  REQUIRE(rows.size() == 3);

  const auto json = (dir / "g.json").string();
  REQUIRE(run({"gof", "--data", data, "--models", "gsd,normal,beta", "--boot", "0", "--out", json, "--seed", "5"})
              .code == 0);
  const auto s = read_gof_summaries_json(json);
  REQUIRE(s.size() == 3);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1].mean_g.value <= s[i].mean_g.value);
  for (const auto& x : s) {
    CHECK_FALSE(x.mean_g.low.has_value());
    CHECK_FALSE(x.aic_total.high.has_value());
  }
}

TEST_CASE("predict") {
  const auto dir = oracle::temp_dir("cli_predict");
  const auto data = (dir / "d.csv").string();
  run({"simulate", "--model", "logit-logistic", "--params", "0.2,0.6", "--n", "50", "--stimuli", "10", "--out", data,
       "--seed", "4"});
  auto r = run({"predict", "--data", data, "--nmin", "10", "--nmax", "20", "--nstep", "10", "--trials", "1", "--out",
                (dir / "p.csv").string(), "--seed", "1", "--svg", (dir / "p.svg").string(), "--raw",
                (dir / "raw.csv").string()});
  CHECK(r.code == 0);
  CHECK(lines(dir / "p.csv").size() == 5);
  CHECK(lines(dir / "raw.csv").size() == 5);
  CHECK(slurp(dir / "p.svg").find("<polyline") != std::string::npos);

  r = run({"predict", "--data", data, "--nmax", "50", "--out", (dir / "p.csv").string(), "--seed", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--nmax") != std::string::npos);
  CHECK(run({"predict", "--data", data, "--metric", "l3", "--out", (dir / "p.csv").string()}).code == 2);
  CHECK(run({"predict", "--data", data, "--nmin", "30", "--nmax", "20", "--out", (dir / "p.csv").string()}).code == 2);
}

TEST_CASE("gcurve, pca and quantiles") {
  const auto dir = oracle::temp_dir("cli_misc");
  const auto data = (dir / "d.csv").string();
  run({"simulate", "--model", "logistic", "--params", "3.5,0.6", "--n", "40", "--stimuli", "60", "--out", data,
       "--seed", "8"});

  REQUIRE(run({"gcurve", "--data", data, "--models", "logistic", "--gmax", "5.991464547", "--points", "2", "--out",
               (dir / "g.csv").string(), "--svg", (dir / "g.svg").string(), "--seed", "1"})
              .code == 0);
  const auto g = lines(dir / "g.csv");
  REQUIRE(g.size() == 3);
  CHECK(g[0] == "g,chi2_reference,logistic");
  CHECK(g[2].rfind("5.99146,0.95,", 0) == 0);

  REQUIRE(run({"pca", "--data", data, "--model", "logistic", "--out", (dir / "pca.json").string(), "--seed", "1"})
              .code == 0);
  const auto pca = read_pca_json(dir / "pca.json");
  CHECK(pca.explained_variance_cumulative[1] >= 0.95);
  REQUIRE(run({"pca", "--data", data, "--out", (dir / "pca.csv").string(), "--standardize"}).code == 0);

  REQUIRE(run({"quantiles", "--data", data, "--model", "logistic", "--out", (dir / "q.csv").string(), "--seed", "1"})
              .code == 0);
  const auto q = lines(dir / "q.csv");
  CHECK(q.size() == 1 + 60 * 9);
  CHECK(run({"quantiles", "--data", data, "--model", "gsd", "--out", (dir / "q.csv").string()}).code == 2);
  CHECK(run({"quantiles", "--data", data, "--model", "beta", "--alphas", "0,0.5", "--out", (dir / "q.csv").string()})
            .code == 2);
}

TEST_CASE("CI mode requires seeds") {
  const auto dir = oracle::temp_dir("cli_ci");
  ::setenv("ACR_CI", "1", 1);
  const auto r = run({"simulate", "--model", "gsd", "--params", "3,0.5", "--n", "10", "--out", (dir / "x.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("--seed") != std::string::npos);
  CHECK(run({"simulate", "--model", "gsd", "--params", "3,0.5", "--n", "10", "--out", (dir / "x.csv").string(),
             "--seed", "0"})
            .code == 0);
  ::unsetenv("ACR_CI");
  CHECK(run({"simulate", "--model", "gsd", "--params", "3,0.5", "--n", "10", "--out", (dir / "x.csv").string()}).code ==
        0);
}
