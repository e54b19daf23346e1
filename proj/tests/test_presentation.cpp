#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xolap/presentation.hpp"

using namespace xolap;
using nlohmann::json;

namespace {

const WarehouseInstance& w() { return *fixtures::sample(); }

QueryState month_category() { return xolap::base(w(), "sales", {{"date", "month"}, {"product", "category"}}); }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Presentation, PivotMonthByCategory) {
  const PivotTable p = to_pivot(evaluate(w(), month_category()), 1);
  EXPECT_EQ(p.row_headers, (std::vector<Coordinate>{{"Jan"}, {"Feb"}}));
  EXPECT_EQ(p.column_headers, (std::vector<Coordinate>{{"catA"}, {"catB"}}));
  ASSERT_EQ(p.body.size(), 2u);
  ASSERT_TRUE(p.body[0][0].has_value());
  EXPECT_EQ((*p.body[0][0])[0], Decimal(60));
  EXPECT_FALSE(p.body[0][1].has_value());
  EXPECT_EQ((*p.body[1][1])[0], Decimal(40));
}

TEST(Presentation, PivotSplitZeroAndInvalid) {
  const CubeView v = evaluate(w(), month_category());
  const PivotTable p = to_pivot(v, 0);
  EXPECT_EQ(p.row_headers.size(), 1u);
  EXPECT_EQ(p.column_headers.size(), v.cells.size());
  try {
    to_pivot(v, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSplit);
  }
}

TEST(Presentation, SwitchReordersRows) {
  const QueryState s = switch_members(month_category(), "date", {"Feb", "Jan"});
  const PivotTable p = to_pivot(evaluate(w(), s), 1);
  EXPECT_EQ(p.row_headers, (std::vector<Coordinate>{{"Feb"}, {"Jan"}}));
  EXPECT_EQ((*p.body[1][0])[0], Decimal(60));
  EXPECT_EQ((*p.body[0][1])[0], Decimal(40));
}

TEST(Presentation, CubeAllTokenSortsLast) {
  const PivotTable p = to_pivot(evaluate(w(), cube(month_category(), {"date", "product"})), 1);
  EXPECT_EQ(p.row_headers, (std::vector<Coordinate>{{"Jan"}, {"Feb"}, {"*"}}));
  EXPECT_EQ(p.column_headers, (std::vector<Coordinate>{{"catA"}, {"catB"}, {"*"}}));
  EXPECT_EQ((*p.body[2][2])[0], Decimal(150));
}

TEST(Presentation, EmptyView) {
  QueryState s = slice(w(), month_category(), "store", "store", "s2");
  s = slice(w(), s, "product", "category", "catB");
  const CubeView v = evaluate(w(), s);
  EXPECT_EQ(serialize(v, Format::Xml), "<result/>\n");
  EXPECT_EQ(serialize(v, Format::Csv), "date,amount\n");
  EXPECT_TRUE(parse_result_xml(serialize(v, Format::Xml)).empty());
}

TEST(Presentation, CsvShape) {
  const CubeView v = evaluate(w(), cube(month_category(), {"date", "product"}));
  const std::string csv = serialize(v, Format::Csv);
  EXPECT_EQ(count_lines(csv), 9u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "date,product,amount");
  EXPECT_NE(csv.find("\n*,*,150\n"), std::string::npos);
  EXPECT_EQ(csv, serialize(v, Format::Csv));
}

TEST(Presentation, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Presentation, XmlRoundTripIsLossless) {
  for (const QueryState& s : {month_category(), cube(month_category(), {"product"}),
                              pull(xolap::base(w(), "sales", {{"store", "store"}}), "amount")}) {
    const CubeView v = evaluate(w(), s);
    EXPECT_EQ(parse_result_xml(serialize(v, Format::Xml)), cell_set(v));
  }
}

TEST(Presentation, JsonMirrorsView) {
  const CubeView v = evaluate(w(), roll_up(w(), xolap::base(w(), "sales", {{"date", "day"}}), "date", "month"));
  const json j = json::parse(serialize(v, Format::Json));
  EXPECT_EQ(j["fact"], "sales");
  EXPECT_EQ(j["axes"][0]["members"], json({"Jan", "Feb"}));
  EXPECT_EQ(j["measures"][0]["aggregate"], "sum");
  ASSERT_EQ(j["cells"].size(), 2u);
  EXPECT_EQ(j["cells"][0]["coord"], json({"Jan"}));
  EXPECT_EQ(j["cells"][0]["values"]["amount"], 60);
}

TEST(Presentation, ParseErrorsQuoteExcerpt) {
  for (const char* bad : {"not xml", "<result><cell><coord dimension=\"d\"/></cell></result>",
                          "<other/>", "<result><cell><measure name=\"m\" value=\"x\"/></cell></result>"}) {
    try {
      parse_result_xml(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutputParseError) << bad;
    }
  }
}

TEST(Presentation, PivotSerializations) {
  const PivotTable p = to_pivot(evaluate(w(), month_category()), 1);
  const std::string csv = serialize(p, Format::Csv);
  EXPECT_EQ(count_lines(csv), 3u);
  EXPECT_NO_THROW(json::parse(serialize(p, Format::Json)));
  EXPECT_NO_THROW(parse_xml(serialize(p, Format::Xml)));
}
