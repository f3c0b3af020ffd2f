#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "run_config.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run qwell_run(std::vector<std::string> args) {
  args.insert(args.begin(), "qwell");
  std::ostringstream out, err;
  Run r;
  r.code = qwell::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qwell_unit_" + name);
}

}  // namespace

TEST_CASE("sudden table") {
  const auto r = qwell_run({"sudden", "--n", "2", "--alpha", "0.5", "--kmax", "4"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "n,k,M,W,row_total,closed_form,deficit");
  CHECK(lines[1].rfind("2,1,", 0) == 0);
  CHECK(r.out.find("# command = sudden") != std::string::npos);
  CHECK(r.out.find("# alpha = 0.5") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"sudden", "--n", "1,3", "--alpha", "0.37", "--format", "json"};
  CHECK(qwell_run(args).out == qwell_run(args).out);
}

TEST_CASE("json envelope") {
  const auto r = qwell_run({"sudden", "--alpha", "0.5", "--kmax", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("config"));
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["k"] == 1);
  CHECK(j["rows"][0]["W"].get<double>() > 0.0);
  CHECK(j["rows"][0]["deficit"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("metadata header reloads as a config, flags override") {
  const auto first = qwell_run({"sudden", "--n", "1", "--alpha", "0.3", "--shift", "0.1", "--kmax", "5"});
  REQUIRE(first.code == 0);
  const auto path = temp_file("sudden.csv");
  {
    std::ofstream f(path);
    f << first.out;
  }
  const auto again = qwell_run({"--config", path.string()});
  CHECK(again.code == 0);
  CHECK(again.out == first.out);
  const auto changed = qwell_run({"sudden", "--config", path.string(), "--kmax", "2"});
  CHECK(data_lines(changed.out).size() == 3);
  CHECK(changed.out.find("# shift = 0.1") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("config loader") {
  const auto path = temp_file("loader.cfg");
  {
    std::ofstream f(path);
    f << "# qwell note line without equals\n# command = bessel\nnmax = \"3\"\n\n";
  }
  const auto kv = qwell::cli::load_config_file(path.string());
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].first == "command");
  CHECK(kv[1].second == "3");
  const auto r = qwell_run({"--config=" + path.string()});
  CHECK(r.code == 0);
  CHECK(data_lines(r.out).size() == 4);
  std::filesystem::remove(path);
  CHECK(qwell_run({"--config", "/nonexistent/qwell.cfg"}).code == 2);
}

TEST_CASE("one-point sweep equals the summary row") {
  const auto summary = qwell_run({"sudden", "--n", "1", "--alpha", "0.4", "--summary"});
  const auto sweep = qwell_run({"sweep", "--base", "sudden", "--alpha", "0.4"});
  REQUIRE(summary.code == 0);
  REQUIRE(sweep.code == 0);
  CHECK(data_lines(summary.out) == data_lines(sweep.out));
}

TEST_CASE("random sweep is reproducible") {
  const std::vector<std::string> args = {"sweep", "--base", "sudden", "--alpha", "0.2,0.9",
                                         "--T", "1,1", "--V", "1e5,1e5",
                                         "--random", "5", "--seed", "11"};
  const auto a = qwell_run(args);
  REQUIRE(a.code == 0);
  CHECK(data_lines(a.out).size() == 6);
  CHECK(a.out == qwell_run(args).out);
}

TEST_CASE("bessel rows") {
  const auto r = qwell_run({"bessel", "--nmax", "3"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "n,z,u,u_minus_1,u_minus_1_2dp,bound,within_bound");
  CHECK(lines[1].find("3.83170597") != std::string::npos);
}

TEST_CASE("regularized rows") {
  const auto r = qwell_run({"regularized", "--V", "1e4,1e5"});
  REQUIRE(r.code == 0);
  CHECK(data_lines(r.out).size() == 3);
  const auto levels = qwell_run({"regularized", "--V", "100", "--levels"});
  REQUIRE(levels.code == 0);
  CHECK(data_lines(levels.out)[0] == "V,n,energy,xi,parity,wavenumber,decay");
}

TEST_CASE("exit codes") {
  CHECK(qwell_run({}).code == 2);
  CHECK(qwell_run({"frobnicate"}).code == 2);
  CHECK(qwell_run({"sudden", "--alpha", "x"}).code == 2);
  CHECK(qwell_run({"evolve", "--grid", "10"}).code == 2);
  CHECK(qwell_run({"sudden", "--alpha", "-1"}).code == 2);
  CHECK(qwell_run({"sweep", "--random", "3", "--alpha", "0.5"}).code == 2);
  const auto domain = qwell_run({"regularized", "--V", "10"});
  CHECK(domain.code == 3);
  CHECK(domain.err.rfind("error: domain: ", 0) == 0);
  CHECK(std::count(domain.err.begin(), domain.err.end(), '\n') == 1);
  CHECK(qwell_run({"sudden", "--help"}).code == 0);
}

TEST_CASE("evolve summary and series file") {
  const auto series = temp_file("series.csv");
  const auto r = qwell_run({"evolve", "--T", "0.01", "--grid", "256", "--kmax", "3",
                            "--series-output", series.string(), "--series-points", "5"});
  REQUIRE(r.code == 0);
  CHECK(data_lines(r.out)[0] == "frame,k,W,W_sudden,cross_rel_diff,norm_drift,remainder,steps");
  std::ifstream f(series);
  std::stringstream text;
  text << f.rdbuf();
  const auto lines = data_lines(text.str());
  CHECK(lines[0] == "frame,t,alpha,tau,W_nn");
  CHECK(lines.size() >= 3);
  std::filesystem::remove(series);
}
