#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "cmtorus/cli.hpp"

using namespace cmtorus::cli;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cmtorus");
  std::ostringstream out, err;
  Run r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("class number with a negative argument") {
  const auto r = run_cli({"quad", "class-number", "-d", "-23"});
  CHECK(r.code == kExitPass);
  CHECK(r.out == "3\n");
  CHECK(r.err.find("wall time") != std::string::npos);
}

TEST_CASE("bad discriminant is a usage error") {
  CHECK(run_cli({"quad", "class-number", "-d", "-5"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"transfer", "--case", "bogus"}).code == kExitUsage);
  CHECK(run_cli({"verify"}).code == kExitUsage);
  CHECK(run_cli({"verify", "--g", "7"}).code == kExitUsage);
  CHECK(run_cli({"verify", "--g", "3", "--jobs", "0"}).code == kExitUsage);
  CHECK(run_cli({"quad", "bs-table", "--min", "10", "--max", "5"}).code == kExitUsage);
}

TEST_CASE("help and version") {
  const auto h = run_cli({"--help"});
  CHECK(h.code == kExitPass);
  CHECK(h.out.find("verify") != std::string::npos);
  const auto v = run_cli({"--version"});
  CHECK(v.code == kExitPass);
  CHECK(v.out == std::string(kVersion) + "\n");
}

TEST_CASE("verify emits header, records and summary") {
  const auto r = run_cli({"verify", "--g", "3", "--weyl", "--jobs", "2"});
  CHECK(r.code == kExitPass);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines.front()["command"] == "verify");
  CHECK(lines.front()["version"] == kVersion);
  CHECK(lines[1]["certificateKind"] == "FullImage");
  CHECK(lines[1]["pass"] == true);
  CHECK(lines.back()["summary"]["configs"] == 2);
  CHECK(lines.back()["summary"]["weyl"]["cokernelTrivial"] == true);
  CHECK(lines.back()["summary"]["pass"] == true);
}

TEST_CASE("verify output does not depend on the worker count") {
  const auto a = run_cli({"verify", "--g", "4", "--jobs", "1"});
  const auto b = run_cli({"verify", "--g", "4", "--jobs", "4"});
  CHECK(a.code == kExitPass);
  CHECK(a.out == b.out);
}

TEST_CASE("enumerate with a cache directory") {
  const auto dir = std::filesystem::temp_directory_path() / "cmtorus-cli-cache";
  std::filesystem::remove_all(dir);
  const auto a = run_cli({"enumerate", "--g", "4", "--primitive", "--cache-dir", dir.string()});
  CHECK(a.code == kExitPass);
  CHECK(!std::filesystem::is_empty(dir));
  const auto b = run_cli({"enumerate", "--g", "4", "--primitive", "--cache-dir", dir.string()});
  CHECK(a.out == b.out);
  const auto lines = json_lines(a.out);
  CHECK(lines.back()["summary"]["configs"] == 28);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache directory from the environment") {
  const auto dir = std::filesystem::temp_directory_path() / "cmtorus-env-cache";
  std::filesystem::remove_all(dir);
  ::setenv(kCacheEnv, dir.string().c_str(), 1);
  const auto r = run_cli({"enumerate", "--g", "2"});
  ::unsetenv(kCacheEnv);
  CHECK(r.code == kExitPass);
  CHECK(std::filesystem::exists(dir));
  std::filesystem::remove_all(dir);
}

TEST_CASE("transfer cases") {
  for (const char* c : {"gerth", "quartic"}) {
    const auto r = run_cli({"transfer", "--case", c});
    CHECK(r.code == kExitPass);
    CHECK(json_lines(r.out).back()["summary"]["pass"] == true);
  }
}

TEST_CASE("quadratic form commands") {
  const auto t = run_cli({"quad", "bs-table", "--min", "3", "--max", "30"});
  CHECK(t.code == kExitPass);
  CHECK(t.out.rfind("discriminant,h,ratio\n-3,1,", 0) == 0);
  const auto s = run_cli({"quad", "split-demo", "-d", "-23", "-x", "2"});
  CHECK(s.code == kExitPass);
  CHECK(json_lines(s.out).front()["distinct"] == true);
  CHECK(run_cli({"quad", "split-demo", "-d", "-23", "-x", "5"}).code == kExitUsage);
}

TEST_CASE("cohomology demo") {
  const auto r = run_cli({"cohomology", "--demo"});
  CHECK(r.code == kExitPass);
  const auto lines = json_lines(r.out);
  CHECK(lines.size() == 7);
  CHECK(lines.back()["summary"]["pass"] == true);
  CHECK(run_cli({"cohomology"}).code == kExitUsage);
}

}  // TEST_SUITE
