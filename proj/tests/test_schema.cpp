#include <gtest/gtest.h>

#include "xolap/sample.hpp"
#include "xolap/schema.hpp"

using namespace xolap;

namespace {

const std::string& sample_model() {
  static const std::string text = sample_warehouse().model();
  return text;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

std::vector<Diagnostic> diagnostics_of(const std::string& model) {
  std::vector<Diagnostic> diags;
  const WarehouseSchema s = parse_schema_lenient(model, ".", diags);
  if (diags.empty()) diags = validate_schema(s);
  return diags;
}

}  // namespace

TEST(Schema, ParsesSampleModel) {
  const WarehouseSchema s = parse_schema(sample_model(), "/wh");
  ASSERT_EQ(s.dimensions.size(), 3u);
  ASSERT_EQ(s.fact_classes.size(), 1u);
  const DimensionSpec* date = s.find_dimension("date");
  ASSERT_NE(date, nullptr);
  ASSERT_EQ(date->levels.size(), 3u);
  EXPECT_EQ(date->levels[0].id, "day");
  EXPECT_EQ(date->levels[2].depth, 3);
  const FactSpec& sales = s.fact_classes[0];
  EXPECT_EQ(sales.id, "sales");
  ASSERT_EQ(sales.measures.size(), 1u);
  EXPECT_EQ(sales.measures[0].aggregate, AggregateFn::Sum);
  EXPECT_EQ(sales.dimension_links, (std::vector<std::string>{"date", "product", "store"}));
  EXPECT_EQ(s.resolve("facts.xml"), std::filesystem::path("/wh/facts.xml"));
  EXPECT_TRUE(validate_schema(s).empty());
}

TEST(Schema, AggregateDefaultsToSum) {
  const auto s = parse_schema(replace(sample_model(), " aggregate=\"sum\"", ""), ".");
  EXPECT_EQ(s.fact_classes[0].measures[0].aggregate, AggregateFn::Sum);
}

TEST(Schema, ConstellationOfTwoFactClasses) {
  const std::string extra =
      "  <FactDoc id=\"returns\" path=\"returns.xml\">\n"
      "    <measure name=\"qty\" type=\"integer\" aggregate=\"count\"/>\n"
      "    <dimension idref=\"date\"/>\n"
      "  </FactDoc>\n</DW-model>";
  const auto s = parse_schema(replace(sample_model(), "</DW-model>", extra), ".");
  ASSERT_EQ(s.fact_classes.size(), 2u);
  EXPECT_TRUE(s.fact_classes[1].links("date"));
  EXPECT_EQ(s.fact_classes[1].measures[0].aggregate, AggregateFn::Count);
}

TEST(Schema, MalformedIsNotASchemaViolation) {
  try {
    parse_schema("<DW-model><dimension></DW-model>", ".");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedXml);
  }
}

TEST(Schema, DuplicateMeasureNamesFactClass) {
  const auto diags = diagnostics_of(replace(sample_model(), "<dimension idref=\"date\"/>",
                                            "<measure name=\"amount\" type=\"integer\"/>\n<dimension idref=\"date\"/>"));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_NE(diags[0].str().find("sales"), std::string::npos) << diags[0].str();
  EXPECT_NE(diags[0].message.find("duplicate measure"), std::string::npos);
}

TEST(Schema, NonContiguousDepths) {
  const auto diags = diagnostics_of(replace(sample_model(), "<Level id=\"month\" depth=\"2\">",
                                            "<Level id=\"month\" depth=\"4\">"));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].message, "non-contiguous depths");
  EXPECT_NE(diags[0].location.find("date"), std::string::npos);
}

// One mutation per invariant; each must be rejected with exactly one
// diagnostic whose text mentions the expected fragment.
TEST(Schema, RejectsEachInvariantViolation) {
  struct Case {
    std::string from, to, expect;
  };
  const std::vector<Case> cases = {
      {"<DW-model>", "<DW-model><bogus/>", "unknown element bogus"},
      {"<dimension id=\"store\" path=\"dimension_store.xml\">", "<dimension id=\"store\">", "@path"},
      {"<FactDoc id=\"sales\"",
       "<dimension id=\"date\" path=\"other.xml\"><Level id=\"day\" depth=\"1\"/></dimension><FactDoc id=\"sales\"",
       "duplicate dimension id"},
      {"<Level id=\"month\" depth=\"2\">", "<Level id=\"day\" depth=\"2\">", "duplicate level id"},
      {"<Level id=\"month\" depth=\"2\">", "<Level id=\"month\" depth=\"two\">", "@depth"},
      {"<attribute name=\"day_num\" type=\"integer\" key=\"false\"/>",
       "<attribute name=\"day_num\" type=\"blob\" key=\"false\"/>", "unknown attribute type"},
      {"<attribute name=\"day_num\" type=\"integer\" key=\"false\"/>",
       "<attribute name=\"day_num\" type=\"integer\" key=\"true\"/>", "exactly one key"},
      {"<attribute name=\"day_num\" type=\"integer\" key=\"false\"/>",
       "<attribute name=\"date\" type=\"integer\" key=\"false\"/>", "duplicate attribute"},
      {"<measure name=\"amount\" type=\"integer\" aggregate=\"sum\"/>",
       "<measure name=\"amount\" type=\"string\" aggregate=\"sum\"/>", "measure type"},
      {"aggregate=\"sum\"", "aggregate=\"median\"", "unknown aggregate"},
      {"<dimension idref=\"store\"/>", "<dimension idref=\"warehouse\"/>", "dangling dimension idref"},
      {"<dimension idref=\"store\"/>", "<dimension idref=\"date\"/>", "duplicate dimension reference"},
      {"<FactDoc id=\"sales\" path=\"facts.xml\">", "<FactDoc path=\"facts.xml\">", "@id"},
  };
  for (const auto& c : cases) {
    const auto diags = diagnostics_of(replace(sample_model(), c.from, c.to));
    ASSERT_EQ(diags.size(), 1u) << c.to;
    EXPECT_NE(diags[0].str().find(c.expect), std::string::npos) << diags[0].str();
    EXPECT_THROW(parse_schema(replace(sample_model(), c.from, c.to), "."), Error);
  }
}

TEST(Schema, RequiresDimensionsAndFacts) {
  EXPECT_EQ(diagnostics_of("<DW-model/>").size(), 2u);
}

TEST(Schema, RoundTrip) {
  const WarehouseSchema s = parse_schema(sample_model(), "/wh");
  const std::string text = serialize_schema(s);
  EXPECT_EQ(parse_schema(text, "/wh"), s);
  EXPECT_EQ(serialize_schema(parse_schema(text, "/wh")), text);
}

TEST(Schema, LevelWithoutAttributesRoundTrips) {
  const std::string model = replace(sample_model(), "<Level id=\"city\" depth=\"2\">\n      <attribute name=\"name\" type=\"string\" key=\"true\"/>\n    </Level>",
                                    "<Level id=\"city\" depth=\"2\"/>");
  const WarehouseSchema s = parse_schema(model, ".");
  EXPECT_TRUE(s.find_dimension("store")->find_level("city")->attributes.empty());
  const std::string text = serialize_schema(s);
  EXPECT_NE(text.find("<Level id=\"city\" depth=\"2\"/>"), std::string::npos);
  EXPECT_EQ(parse_schema(text, "."), s);
}

TEST(Schema, RandomSchemasRoundTripDeterministically) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.facts = 1;
    const WarehouseSchema s = parse_schema(random_warehouse(config).model(), ".");
    const std::string a = serialize_schema(s);
    EXPECT_EQ(a, serialize_schema(s));
    EXPECT_EQ(parse_schema(a, "."), s) << seed;
  }
}
