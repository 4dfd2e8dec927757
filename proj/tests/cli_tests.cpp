// End-to-end checks of the command line tool: golden reports, exit codes,
// and determinism. The tool path and data directories come in as compile
// definitions so the binary can be run from anywhere.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const std::string kTool = MLI_TOOL_PATH;
const std::string kFixtures = MLI_FIXTURES_DIR;
const std::string kGolden = MLI_GOLDEN_DIR;
const std::string kTmp = MLI_TMP_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read ", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the tool with the given argument string, capturing both streams.
RunResult run(const std::string& args) {
  fs::create_directories(kTmp);
  const fs::path out_path = fs::path(kTmp) / "stdout.txt";
  const fs::path err_path = fs::path(kTmp) / "stderr.txt";
  const std::string cmd = "'" + kTool + "' " + args + " >'" +
                          out_path.string() + "' 2>'" + err_path.string() +
                          "'";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string fixture(const std::string& name) {
  return "'" + kFixtures + "/" + name + "'";
}

void replace_all(std::string& text, const std::string& from,
                 const std::string& to) {
  for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos;
       pos += to.size())
    text.replace(pos, from.size(), to);
}

// Compares against tests/golden/<name>, with @FIXTURES@ standing in for
// the fixture directory. On mismatch the actual bytes are parked next to
// the temp files for a quick diff.
void check_golden(const std::string& name, const std::string& actual) {
  std::string expected = slurp(fs::path(kGolden) / name);
  replace_all(expected, "@FIXTURES@", kFixtures);
  if (expected != actual) {
    const fs::path dump = fs::path(kTmp) / (name + ".actual");
    std::ofstream(dump, std::ios::binary) << actual;
    FAIL_CHECK("output differs from golden ", name, "; actual saved to ",
               dump.string());
  }
}

}  // namespace

TEST_CASE("analyze reports the chain program") {
  auto r = run("analyze " + fixture("chain.mln"));
  CHECK(r.exit_code == 0);
  CHECK(r.err.empty());
  check_golden("analyze_chain.txt", r.out);
}

TEST_CASE("analyze flags the non-determinate program and exits 1") {
  auto r = run("analyze " + fixture("indeterminate.mln"));
  CHECK(r.exit_code == 1);
  CHECK(r.err.empty());
  check_golden("analyze_indeterminate.txt", r.out);
}

TEST_CASE("an unbounded existential is rejected") {
  auto r = run("analyze " + fixture("loves.mln"));
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  check_golden("analyze_loves.stderr.txt", r.err);
}

TEST_CASE("uniqueness certifies the subcritical chain") {
  auto r = run("uniqueness " + fixture("chain.mln"));
  CHECK(r.exit_code == 0);
  check_golden("uniqueness_chain.txt", r.out);
}

TEST_CASE("query prints the exact conditional under an explicit boundary") {
  auto r = run("query " + fixture("chain.mln") +
               " --atoms 'Q(s(0)),Q(s(s(0)))' --boundary-policy explicit"
               " --boundary 'Q(0)=1,Q(s(s(s(0))))=0'");
  CHECK(r.exit_code == 0);
  check_golden("query_chain.txt", r.out);
}

TEST_CASE("query switches to the limit distribution on hard programs") {
  auto r = run("query " + fixture("contradiction.mln") +
               " --atoms 'P(A)' --boundary-policy free");
  CHECK(r.exit_code == 0);
  check_golden("query_contradiction.txt", r.out);
}

TEST_CASE("sat traces the induction contradiction to depth two") {
  auto r = run("sat " + fixture("induction.mln"));
  CHECK(r.exit_code == 0);
  check_golden("sat_induction.txt", r.out);
}

TEST_CASE("entail certifies the doubly applied successor fact") {
  auto r = run("entail " + fixture("induction_pos.mln") +
               " --formula 'P(f(f(0)))'");
  CHECK(r.exit_code == 0);
  check_golden("entail_induction_pos.txt", r.out);
}

TEST_CASE("sample output is seed-deterministic") {
  const std::string args = "sample " + fixture("chain.mln") +
                           " --query 'Q(0)' --radius 2 --sweeps 400"
                           " --burnin 50 --seed 42 --boundary-policy all-one";
  auto r1 = run(args);
  CHECK(r1.exit_code == 0);
  check_golden("sample_chain.txt", r1.out);
  auto r2 = run(args);
  CHECK(r2.out == r1.out);
}

TEST_CASE("sensitivity compares the three standard policies") {
  auto r = run("sensitivity " + fixture("chain.mln") +
               " --query 'Q(0)' --radius 2 --sweeps 400 --burnin 50"
               " --seed 7");
  CHECK(r.exit_code == 0);
  check_golden("sensitivity_chain.txt", r.out);
}

TEST_CASE("-o writes the same bytes to a file") {
  fs::create_directories(kTmp);
  const fs::path copy = fs::path(kTmp) / "report_copy.txt";
  auto r = run("uniqueness " + fixture("chain.mln") + " -o '" +
               copy.string() + "'");
  CHECK(r.exit_code == 0);
  CHECK(slurp(copy) == r.out);
}

TEST_CASE("the trace file has one row per sweep") {
  fs::create_directories(kTmp);
  const fs::path trace = fs::path(kTmp) / "trace.txt";
  auto r = run("sample " + fixture("chain.mln") +
               " --query 'Q(0)' --radius 1 --sweeps 25 --burnin 5 --seed 3" +
               " --boundary-policy all-zero --trace '" + trace.string() + "'");
  CHECK(r.exit_code == 0);
  std::istringstream lines(slurp(trace));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 25);
}

TEST_CASE("usage problems exit 2") {
  CHECK(run("frobnicate " + fixture("chain.mln")).exit_code == 2);
  CHECK(run("analyze '" + kFixtures + "/no_such_file.mln'").exit_code == 2);
  CHECK(run("query " + fixture("chain.mln") + " --atoms 'Q(0)'" +
            " --boundary-policy sideways")
            .exit_code == 2);
  CHECK(run("sample " + fixture("chain.mln") + " --query 'Q(0)'")
            .exit_code == 2);  // missing --seed
  auto missing = run("analyze '" + kFixtures + "/no_such_file.mln'");
  CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("--help exits 0") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("query --help").exit_code == 0);
}

TEST_CASE("sampling a hard program is rejected with exit 1") {
  auto r = run("sample " + fixture("induction.mln") +
               " --query 'P(0)' --seed 1 --boundary-policy all-zero");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("rejected:") == 0);
}
