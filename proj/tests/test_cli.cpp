#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "support/fixtures.hpp"

using geobench::testing::TempDir;
using geobench::testing::read_text;
using geobench::testing::write_text;

namespace {

int cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string("\"") + GEOBENCH_CLI + "\" " + args + " >\"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("cli: run, report, compare") {
  TempDir dir;
  const auto config = geobench::testing::write_planted_workspace(dir.path());
  const auto log = dir / "log.txt";
  REQUIRE(cli("run --config " + q(config) + " --out " + q(dir / "out") + " --workers 3", log) == 0);
  CHECK(std::filesystem::exists(dir / "out" / "run.json"));
  CHECK(std::filesystem::exists(dir / "out" / "planted" / "baseline.json"));

  REQUIRE(cli("report --run-dir " + q(dir / "out"), log) == 0);
  const std::string text = read_text(log);
  CHECK(text.find("planted") != std::string::npos);
  CHECK(text.find("baseline-nocaps") != std::string::npos);

  REQUIRE(cli("compare --run-dir " + q(dir / "out") + " --corpus planted-lower --format csv", log) == 0);
  const std::string csv = read_text(log);
  CHECK(csv.rfind("geoparser,accuracy,", 0) == 0);
  CHECK(csv.find("baseline-nocaps,1.000") != std::string::npos);

  CHECK(cli("compare --run-dir " + q(dir / "out") + " --corpus nowhere", log) != 0);
}

TEST_CASE("cli: ingest and gazetteer") {
  TempDir dir;
  geobench::testing::write_planted_workspace(dir.path());
  const auto log = dir / "log.txt";
  REQUIRE(cli("ingest --corpus " + q(dir / "planted.jsonl") + " --completeness complete --lowercase-out " +
                  q(dir / "lower.jsonl"),
              log) == 0);
  CHECK(read_text(log).find("\"document_count\": 20") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "lower.jsonl"));
  CHECK(std::filesystem::exists(dir / "lower.manifest.json"));
  REQUIRE(cli("ingest --corpus " + q(dir / "lower.jsonl") + " --manifest " + q(dir / "lower.manifest.json"), log) == 0);

  REQUIRE(cli("gazetteer --input " + q(dir / "gazetteer.tsv") + " --out-index " + q(dir / "index.tsv"), log) == 0);
  const std::string index = read_text(dir / "index.tsv");
  CHECK(index.find("port elderwick\t1002") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  TempDir dir;
  const auto config = geobench::testing::write_planted_workspace(dir.path());
  const auto log = dir / "log.txt";
  CHECK(cli("", log) == 1);
  CHECK(cli("run --out x", log) == 1);
  CHECK(cli("report --run-dir x --format xml", log) == 1);
  CHECK(cli("run --config " + q(dir / "missing.json") + " --out " + q(dir / "o"), log) == 1);

  write_text(dir / "broken.jsonl", "{\"id\": \"a\", \"text\": \"abc\", \"toponyms\": [{\"start\": 0, \"end\": 9, \"name\": \"abc\"}]}\n");
  CHECK(cli("ingest --corpus " + q(dir / "broken.jsonl") + " --completeness complete", log) == 2);
  CHECK(cli("gazetteer --input " + q(dir / "nothing.tsv"), log) == 2);

  const std::string adapter_run = R"([{"kind": "external-process", "id": "broken",
      "parameters": {"command": [")" + std::string(GEOBENCH_FAKE_ADAPTER) + R"(", "garbage"], "timeout_s": 10}}])";
  TempDir other;
  const auto bad = geobench::testing::write_planted_workspace(other.path(), adapter_run);
  CHECK(cli("run --config " + q(bad) + " --out " + q(other / "out"), log) == 3);
  CHECK(read_text(log).find("this is not json") != std::string::npos);
}
