#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "fixtures.hpp"
#include "pipegen.hpp"
#include "xolap/codegen.hpp"

using namespace xolap;

namespace {

const WarehouseInstance& w() { return *fixtures::sample(); }

QueryState months() { return roll_up(w(), xolap::base(w(), "sales", {{"date", "day"}}), "date", "month"); }

// Names the query calls or references that it does not declare itself.
std::set<std::string> undeclared(const std::string& text) {
  std::set<std::string> used, declared;
  const std::regex fn_use(R"(local:([A-Za-z_-]+)\()");
  const std::regex fn_decl(R"(declare function local:([A-Za-z_-]+)\()");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), fn_use); it != std::sregex_iterator(); ++it) {
    used.insert((*it)[1]);
  }
  for (auto it = std::sregex_iterator(text.begin(), text.end(), fn_decl); it != std::sregex_iterator(); ++it) {
    declared.insert((*it)[1]);
  }
  std::set<std::string> out;
  for (const auto& u : used) {
    if (!declared.count(u)) out.insert(u);
  }
  return out;
}

}  // namespace

TEST(Codegen, RollupGroupsByMonthAncestor) {
  const GeneratedQuery q = compile(months(), w().schema(), QueryDialect::Xq31);
  EXPECT_NE(q.text.find("group by"), std::string::npos);
  EXPECT_NE(q.text.find("\"month\""), std::string::npos);
  EXPECT_NE(q.text.find("declare function local:ancestor"), std::string::npos);
  EXPECT_EQ(q.documents, (std::vector<std::string>{"dimension_date.xml", "facts.xml"}));
}

TEST(Codegen, Xq10AvoidsGroupBy) {
  const GeneratedQuery q = compile(months(), w().schema(), QueryDialect::Xq10);
  EXPECT_EQ(q.text.find("group by"), std::string::npos);
  EXPECT_NE(q.text.find("distinct-values"), std::string::npos);
  EXPECT_EQ(q.text.rfind("xquery version \"1.0\";", 0), 0u);
}

TEST(Codegen, ZeroAxisHasNoKey) {
  const GeneratedQuery q = compile(xolap::base(w(), "sales", {}), w().schema(), QueryDialect::Xq31);
  EXPECT_EQ(q.text.find("group by"), std::string::npos);
  EXPECT_NE(q.text.find("exists($g)"), std::string::npos);
}

TEST(Codegen, DeterministicAndDialectsDiffer) {
  for (auto d : {QueryDialect::Xq31, QueryDialect::Xq10}) {
    EXPECT_EQ(compile(months(), w().schema(), d).text, compile(months(), w().schema(), d).text);
  }
  EXPECT_NE(compile(months(), w().schema(), QueryDialect::Xq31).text,
            compile(months(), w().schema(), QueryDialect::Xq10).text);
}

TEST(Codegen, OneBlockPerCubeGrouping) {
  const QueryState s = cube(xolap::base(w(), "sales", {{"date", "month"}, {"product", "category"}}), {"date", "product"});
  const std::string text = compile(s, w().schema(), QueryDialect::Xq31).text;
  std::size_t blocks = 0;
  for (auto pos = text.find("<cell>"); pos != std::string::npos; pos = text.find("<cell>", pos + 1)) ++blocks;
  EXPECT_EQ(blocks, 4u);
}

TEST(Codegen, SelfContainedOverRandomPipelines) {
  GeneratorConfig config;
  config.seed = 11;
  config.facts = 50;
  config.ragged_fraction = 0.1;
  config.missing_fraction = 0.05;
  const auto inst = load_files(random_warehouse(config));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const QueryState s = run_pipeline(*inst, pipegen::random_pipeline(*inst, rng));
    for (auto d : {QueryDialect::Xq31, QueryDialect::Xq10}) {
      const std::string text = compile(s, inst->schema(), d).text;
      EXPECT_TRUE(undeclared(text).empty()) << text;
      EXPECT_EQ(text.find("{query_file}"), std::string::npos);
    }
  }
}

TEST(Codegen, DialectNames) {
  EXPECT_EQ(parse_dialect("xq31"), QueryDialect::Xq31);
  EXPECT_EQ(parse_dialect("xq10"), QueryDialect::Xq10);
  EXPECT_FALSE(parse_dialect("xq30").has_value());
  EXPECT_EQ(to_string(QueryDialect::Xq10), "xq10");
}
