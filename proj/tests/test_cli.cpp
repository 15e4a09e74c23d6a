#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI through the shell with stderr discarded.
Run run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(PARSETUTOR_CLI) + " " + args + " 2>/dev/null";
  std::string input_file;
  if (!stdin_text.empty()) {
    input_file = std::string("/tmp/parsetutor-cli-stdin-") + std::to_string(::getpid());
    std::ofstream(input_file) << stdin_text;
    cmd += " < " + input_file;
  }
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  if (!input_file.empty()) std::remove(input_file.c_str());
  return r;
}

std::string grammar(const std::string& name) { return std::string(PARSETUTOR_SOURCE_DIR) + "/grammars/" + name; }

std::string last_line(const std::string& s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  const auto pos = t.rfind('\n');
  return pos == std::string::npos ? t : t.substr(pos + 1);
}

}  // namespace

TEST_CASE("analyze prints the G3 SLR table as JSON") {
  const Run r = run("analyze " + grammar("g3.cfg") + " --format json");
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);
  std::map<std::pair<int, std::string>, std::string> cells;
  for (const auto& c : doc["slrTable"]["cells"]) {
    REQUIRE(c["entries"].size() == 1);
    cells[{c["row"], c["column"]}] = c["entries"][0];
  }
  const std::map<std::pair<int, std::string>, std::string> expected{
      {{0, "a"}, "s3"}, {{0, "d"}, "s4"}, {{0, "S"}, "1"}, {{0, "C"}, "2"}, {{1, "$"}, "acc"},
      {{2, "a"}, "s3"}, {{2, "d"}, "s4"}, {{2, "C"}, "5"}, {{3, "a"}, "s3"}, {{3, "d"}, "s4"},
      {{3, "C"}, "6"},  {{4, "a"}, "r3"}, {{4, "d"}, "r3"}, {{4, "$"}, "r3"}, {{5, "$"}, "r1"},
      {{6, "a"}, "r2"}, {{6, "d"}, "r2"}, {{6, "$"}, "r2"}};
  CHECK(cells == expected);
  CHECK(doc["reduceStates"] == json::array({1, 4, 5, 6}));
  CHECK(run("analyze " + grammar("g3.cfg") + " --format json").out == r.out);
}

TEST_CASE("analyze text output") {
  const Run r = run("analyze " + grammar("expr.cfg"));
  CHECK(r.status == 0);
  CHECK(r.out.find("T' | ") != std::string::npos);
  CHECK(r.out.find("SLR table") != std::string::npos);
}

TEST_CASE("genstring on the expression grammar") {
  const Run r = run("genstring " + grammar("expr.cfg") + " --kind ll --cell \"T':)\"");
  REQUIRE(r.status == 0);
  CHECK(r.out.substr(0, r.out.find('\n')) == "id * ( id )");
  CHECK(last_line(r.out).find("accept") != std::string::npos);

  const Run j = run("genstring " + grammar("expr.cfg") + " --kind ll --cell \"T':)\" --format json");
  REQUIRE(j.status == 0);
  CHECK(json::parse(j.out)["inputText"] == "id * ( id )");

  const Run lr = run("genstring " + grammar("g3.cfg") + " --kind slr --cell 4:a");
  CHECK(lr.out.substr(0, lr.out.find('\n')) == "d a d");
}

TEST_CASE("parse prints an accepting trace") {
  const Run r = run("parse " + grammar("g3.cfg") + " --input \"d a d\"");
  REQUIRE(r.status == 0);
  const std::string last = last_line(r.out);
  CHECK(last.find("accept") != std::string::npos);
  CHECK(last.find("0S1") != std::string::npos);

  const Run ll = run("parse " + grammar("g2.cfg") + " --kind ll --input \"a b\"");
  CHECK(ll.status == 0);
  CHECK(last_line(ll.out).find("accept") != std::string::npos);
}

TEST_CASE("parse with a user table file") {
  const std::string table = "/tmp/parsetutor-cli-table-" + std::to_string(::getpid()) + ".json";
  std::ofstream(table) << R"({"cells":[{"row":"S","column":"a","productions":[0]},)"
                       << R"({"row":"A","column":"c","productions":[1]},)"
                       << R"({"row":"A","column":"b","productions":[2]},)"
                       << R"({"row":"A","column":"d","productions":[2]},)"
                       << R"({"row":"B","column":"d","productions":[3]},)"
                       << R"({"row":"B","column":"b","productions":[3]}]})";
  const Run r = run("parse " + grammar("g2.cfg") + " --kind ll --table " + table + " --input \"a b\"");
  CHECK(r.status == 0);
  CHECK(last_line(r.out).find("rejected: mismatch") == 0);
  const Run j = run("parse " + grammar("g2.cfg") + " --kind ll --table " + table + " --input \"a b\" --format json");
  CHECK(json::parse(j.out)["outcome"]["accepted"] == false);
  std::remove(table.c_str());
}

TEST_CASE("exit codes") {
  const std::string bad = "/tmp/parsetutor-cli-bad-" + std::to_string(::getpid()) + ".cfg";
  std::ofstream(bad) << "S -> a\nS b\n";
  CHECK(run("analyze " + bad).status == 2);
  std::remove(bad.c_str());
  CHECK(run("").status == 1);
  CHECK(run("analyze /nonexistent/file.cfg").status == 1);
  CHECK(run("analyze " + grammar("g3.cfg") + " --format yaml").status == 1);
  CHECK(run("genstring " + grammar("g3.cfg") + " --cell 9:a").status == 1);
  CHECK(run("genstring " + grammar("g4.cfg") + " --kind ll --cell T:0").status == 1);
  CHECK(run("parse " + grammar("g3.cfg") + " --input \"d x\"").status == 1);
  CHECK(run("--help").status == 0);
}

TEST_CASE("quiz reads answers from standard input") {
  const Run r = run("quiz " + grammar("g4.cfg") + " --topics first-set --seed 1", "a\n1\n1\nb c\nb c\n");
  CHECK(r.status == 0);
  CHECK(r.out.find("Which symbols should be included in FIRST[") != std::string::npos);
  CHECK(r.out.find("Score:") != std::string::npos);
  CHECK(run("quiz " + grammar("g4.cfg") + " --topics parsing").status == 1);
}
