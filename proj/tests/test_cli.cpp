#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "xolap/presentation.hpp"
#include "xolap/sample.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr discarded unless `keep_stderr`.
CliRun cli(const std::string& args, bool keep_stderr = false, const std::string& env = "") {
  const std::string cmd = env + " " XOLAP_CLI " " + args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("xolap_cli_" + name);
  fs::remove_all(p);
  return p;
}

fs::path write_pipeline(const fs::path& dir, const std::string& text) {
  fs::create_directories(dir);
  const fs::path p = dir / "pipeline.json";
  std::ofstream(p) << text;
  return p;
}

const char* kRollup = R"([{"op":"base","fact":"sales","axes":[{"dimension":"date","level":"day"}]},
                          {"op":"rollup","dimension":"date","level":"month"}])";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, GenSampleAndValidate) {
  const fs::path dir = scratch("sample");
  EXPECT_EQ(cli("gen-sample " + dir.string()).status, 0);
  for (const auto& [name, text] : xolap::sample_warehouse().documents) EXPECT_EQ(slurp(dir / name), text) << name;
  const CliRun v = cli("validate " + dir.string(), true);
  EXPECT_EQ(v.status, 0);
  EXPECT_EQ(v.out, "");
}

TEST(Cli, ValidateFailures) {
  const fs::path dir = scratch("dangling");
  cli("gen-sample " + dir.string());
  std::string facts = slurp(dir / "facts.xml");
  facts.replace(facts.find("value-id=\"p3\""), 13, "value-id=\"p9\"");
  std::ofstream(dir / "facts.xml") << facts;
  const CliRun v = cli("validate " + dir.string(), true);
  EXPECT_EQ(v.status, 1);
  EXPECT_EQ(std::count(v.out.begin(), v.out.end(), '\n'), 1) << v.out;

  fs::remove(dir / "dw-model.xml");
  EXPECT_EQ(cli("validate " + dir.string()).status, 2);
  std::ofstream(dir / "dw-model.xml") << "<DW-model><oops></DW-model>";
  EXPECT_EQ(cli("validate " + dir.string()).status, 2);
}

TEST(Cli, QueryFormats) {
  const fs::path dir = scratch("query");
  cli("gen-sample " + dir.string());
  const fs::path p = write_pipeline(dir / "p", kRollup);
  const CliRun csv = cli("query " + dir.string() + " " + p.string() + " --format csv");
  EXPECT_EQ(csv.status, 0);
  EXPECT_EQ(csv.out, "date,amount\nJan,60\nFeb,90\n");
  const CliRun xml = cli("query " + dir.string() + " " + p.string());
  EXPECT_EQ(xml.status, 0);
  EXPECT_EQ(xml.out.rfind("<result>", 0), 0u);
  EXPECT_EQ(xolap::parse_result_xml(xml.out).size(), 2u);
  const CliRun json = cli("query " + dir.string() + " " + p.string() + " --format json");
  EXPECT_EQ(nlohmann::json::parse(json.out)["cells"].size(), 2u);
}

TEST(Cli, QueryErrors) {
  const fs::path dir = scratch("query_errors");
  cli("gen-sample " + dir.string());
  const CliRun malformed = cli("query " + dir.string() + " " + write_pipeline(dir / "a", "[{\"op\":").string(), true);
  EXPECT_EQ(malformed.status, 1);
  EXPECT_NE(malformed.out.find("at byte"), std::string::npos) << malformed.out;
  EXPECT_EQ(std::count(malformed.out.begin(), malformed.out.end(), '\n'), 1);
  const CliRun mismatch = cli(
      "query " + dir.string() + " " +
          write_pipeline(dir / "b", R"([{"op":"base","fact":"sales","axes":[{"dimension":"weather","level":"x"}]}])")
              .string(),
      true);
  EXPECT_EQ(mismatch.status, 1);
  EXPECT_NE(mismatch.out.find("UnknownDimension"), std::string::npos);
}

TEST(Cli, CompileMatchesGolden) {
  const fs::path dir = scratch("compile");
  cli("gen-sample " + dir.string());
  const fs::path golden = fs::path(XOLAP_GOLDEN_DIR) / "rollup_month.json";
  for (const char* dialect : {"xq31", "xq10"}) {
    const CliRun r = cli("compile " + dir.string() + " " + golden.string() + " --dialect " + dialect);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, slurp(fs::path(XOLAP_GOLDEN_DIR) / (std::string("rollup_month.") + dialect + ".xq")));
  }
}

TEST(Cli, CompileRunWithoutProcessor) {
  const fs::path dir = scratch("compile_run");
  cli("gen-sample " + dir.string());
  const fs::path p = write_pipeline(dir / "p", kRollup);
  EXPECT_EQ(cli("compile " + dir.string() + " " + p.string() + " --run", false, "env -u XOLAP_XQUERY_CMD").status, 3);
}

TEST(Cli, CompileRunWithProcessor) {
  if (std::getenv("XOLAP_XQUERY_CMD") == nullptr) GTEST_SKIP() << "XOLAP_XQUERY_CMD not set";
  const fs::path dir = scratch("compile_run_ok");
  cli("gen-sample " + dir.string());
  const fs::path p = write_pipeline(dir / "p", kRollup);
  const CliRun native = cli("query " + dir.string() + " " + p.string());
  for (const char* dialect : {"xq31", "xq10"}) {
    const CliRun r = cli("compile " + dir.string() + " " + p.string() + " --run --dialect " + dialect);
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(xolap::parse_result_xml(r.out), xolap::parse_result_xml(native.out));
  }
}

TEST(Cli, RandomGenerationIsReproducible) {
  const fs::path a = scratch("gen_a"), b = scratch("gen_b");
  EXPECT_EQ(cli("gen-sample " + a.string() + " --facts 10000 --seed 7").status, 0);
  EXPECT_EQ(cli("gen-sample " + b.string() + " --facts 10000 --seed 7").status, 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
  }
  EXPECT_GE(files, 5u);
  EXPECT_EQ(cli("validate " + a.string()).status, 0);
}

TEST(Cli, GenSampleUnwritableTarget) {
  const fs::path file = scratch("blocker");
  std::ofstream(file) << "x";
  EXPECT_EQ(cli("gen-sample " + (file / "sub").string()).status, 1);
}

TEST(Cli, ServeRejectsInvalidWarehouse) {
  const fs::path dir = scratch("serve_bad");
  cli("gen-sample " + dir.string());
  std::string facts = slurp(dir / "facts.xml");
  facts.replace(facts.find("value-id=\"p3\""), 13, "value-id=\"p9\"");
  std::ofstream(dir / "facts.xml") << facts;
  EXPECT_EQ(cli("serve " + dir.string() + " --port 0").status, 1);
}
