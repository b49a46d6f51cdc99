#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "procview/cli.hpp"

using namespace procview;

namespace {

const std::string kSample = std::string(PROCVIEW_SOURCE_DIR) + "/specs/pipeline.pspec";

int exit_code(const std::string& args) {
  const std::string cmd = std::string(PROCVIEW_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("procview_test_" + name);
}

}  // namespace

TEST(Cli, CheckSample) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::check(kSample, out, err), cli::kOk) << err.str();
  EXPECT_EQ(out.str(), "ok: 3 process(es), 5 composition(s), 2 environment(s)\n");
}

TEST(Cli, CheckReportsDiagnostics) {
  const auto p = temp_file("bad.pspec");
  std::ofstream(p) << "process P() {\n  calc:\n}\n";
  std::ostringstream out, err;
  EXPECT_EQ(cli::check(p.string(), out, err), cli::kDiagnostics);
  EXPECT_NE(err.str().find("SyntaxError"), std::string::npos);
  EXPECT_NE(err.str().find("ending"), std::string::npos);
}

TEST(Cli, CheckReportsCompileErrors) {
  const auto p = temp_file("noentry.pspec");
  std::ofstream(p) << "process P() { ending: true; calc: }\ncompose M = (loop(auto 1) P) ; P\n";
  std::ostringstream out, err;
  EXPECT_EQ(cli::check(p.string(), out, err), cli::kDiagnostics);
  EXPECT_NE(err.str().find("CompileError"), std::string::npos);
}

TEST(Cli, SimulateSummary) {
  std::ostringstream out, err;
  cli::SimulateOptions o{kSample, "M", "E", 20, "", "text"};
  ASSERT_EQ(cli::simulate(o, out, err), cli::kOk) << err.str();
  EXPECT_NE(out.str().find("exit Sink.stop at: 8\n"), std::string::npos);
  EXPECT_NE(out.str().find("3 | Sink.stop=⟨⟩ | Worker.start=⟨⟩ | Worker.stop=⟨√⟩"), std::string::npos);
}

TEST(Cli, SimulateWritesTraceFileDeterministically) {
  const auto a = temp_file("a.json"), b = temp_file("b.json");
  std::ostringstream out, err;
  ASSERT_EQ(cli::simulate({kSample, "Fork", "E", 20, a.string(), "structured"}, out, err), cli::kOk);
  ASSERT_EQ(cli::simulate({kSample, "Fork", "E", 20, b.string(), "structured"}, out, err), cli::kOk);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a).find("\"horizon\": 20"), std::string::npos);
}

TEST(Cli, UnknownNames) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::simulate({kSample, "Nope", "E", 20, "", "text"}, out, err), cli::kDiagnostics);
  EXPECT_EQ(cli::simulate({kSample, "M", "Nope", 20, "", "text"}, out, err), cli::kDiagnostics);
}

TEST(Cli, WcetSequentialFixture) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::wcet({kSample, "M", "declared", "zero", 256}, out, err), cli::kOk) << err.str();
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "wcet(M) = 8  [bounds=declared, connector-cost=zero]");
  EXPECT_NE(out.str().find("; = 8"), std::string::npos);
  EXPECT_NE(out.str().find("Worker = 3"), std::string::npos);
  EXPECT_NE(out.str().find("Sink = 5"), std::string::npos);
}

TEST(Cli, WcetMeasured) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::wcet({kSample, "Gate", "measured", "measured", 64}, out, err), cli::kOk) << err.str();
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "wcet(Gate) = 3  [bounds=measured, connector-cost=measured]");
}

TEST(Cli, ActivityQueries) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::activity({kSample, "M", "E", "on(Worker, y)@3", 20}, out, err), cli::kOk) << err.str();
  EXPECT_EQ(out.str(), "query on(Worker, y)@3: holds\n");
  std::ostringstream out2;
  EXPECT_EQ(cli::activity({kSample, "M", "E", "bogus(", 20}, out2, err), cli::kUsage);
}

TEST(Cli, ExportDeterministic) {
  for (const char* to : {"dot", "pnml"}) {
    const auto a = temp_file(std::string("a.") + to), b = temp_file(std::string("b.") + to);
    std::ostringstream out, err;
    ASSERT_EQ(cli::export_cmd({kSample, "Fork", to, a.string()}, out, err), cli::kOk) << err.str();
    ASSERT_EQ(cli::export_cmd({kSample, "Fork", to, b.string()}, out, err), cli::kOk);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(slurp(a).empty());
  }
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(exit_code("check " + kSample), 0);
  EXPECT_EQ(exit_code("frobnicate"), 2);
  EXPECT_EQ(exit_code(""), 2);
  EXPECT_EQ(exit_code("simulate " + kSample + " --compose M"), 2);
  EXPECT_EQ(exit_code("export " + kSample + " --compose M --to svg --out -"), 2);
  EXPECT_EQ(exit_code("check /nonexistent/file.pspec"), 2);
  EXPECT_EQ(exit_code("simulate " + kSample + " --compose Nope --env E --horizon 5"), 1);
  EXPECT_EQ(exit_code("--help"), 0);
}
