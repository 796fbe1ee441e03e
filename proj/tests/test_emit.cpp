#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cvwork/emit.hpp"

using namespace cvwork;

namespace {

SweepRow physical_row() { return evaluate_row({5, 5, 3, -3}); }
SweepRow nonphysical_row() { return evaluate_row({1, 1, 0.5, -0.5}); }

}  // namespace

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(5.0), "5");
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(-2.5), "-2.5");
  const double x = 0.4083499336648111;
  EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(WriteCsv, OneRow) {
  std::ostringstream os;
  write_csv(os, {physical_row()});
  EXPECT_EQ(os.str(),
            "a,b,c1,c2,physical,separable,steer_b_to_a,steer_a_to_b,w_hom,w_het\n"
            "5,5,3,-3,1,1,0,0,0.5,0.75\n");
}

TEST(WriteCsv, NonphysicalRowHasEmptyWorks) {
  std::ostringstream os;
  write_csv(os, {nonphysical_row()});
  EXPECT_EQ(os.str(),
            "a,b,c1,c2,physical,separable,steer_b_to_a,steer_a_to_b,w_hom,w_het\n"
            "1,1,0.5,-0.5,0,0,0,0,,\n");
}

TEST(WriteJson, MirrorsFieldNames) {
  std::ostringstream os;
  write_json(os, {physical_row(), nonphysical_row()});
  const auto parsed = json::parse(os.str());
  ASSERT_TRUE(parsed.is_array());
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0]["w_het"].get<double>(), 0.75);
  EXPECT_EQ(parsed[0]["separable"].get<bool>(), true);
  EXPECT_TRUE(parsed[1]["w_hom"].is_null());
  EXPECT_TRUE(parsed[1]["w_het"].is_null());
  std::vector<std::string> names;
  for (const auto& item : parsed[0].items()) names.push_back(item.key());
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b", "c1", "c2", "physical", "separable", "steer_b_to_a",
                                             "steer_a_to_b", "w_hom", "w_het"}));
  EXPECT_EQ(os.str().back(), '\n');
}

TEST(ToJson, ClassRecordHasFourFlags) {
  const auto j = to_json(classify(StandardFormParams{5, 5, 4.6, -4.6}));
  EXPECT_EQ(j.size(), 4u);
  EXPECT_EQ(j["physical"], true);
  EXPECT_EQ(j["separable"], false);
  EXPECT_EQ(j["steerable_b_to_a"], true);
  EXPECT_EQ(j["steerable_a_to_b"], true);
}

TEST(ToJson, RedDotAndTrajectory) {
  const auto d = to_json(RedDot{BoundaryKind::Separability, -4, 4, 1, false});
  EXPECT_EQ(d["boundary"], "sep");
  EXPECT_EQ(d["at_edge"], false);
  const auto t = to_json(run_protocol({5, 5, 3, -3}, ProtocolKind::Heterodyne, Vec2(2, 2)));
  EXPECT_EQ(t["post_displacement"]["mean"][0], 0.0);
  EXPECT_NEAR(t["work"].get<double>(), 0.75, 1e-14);
}

TEST(Emit, WritesFileAndReportsIoError) {
  const auto path = std::filesystem::temp_directory_path() / "cvwork_emit_test.csv";
  emit({physical_row()}, Format::Csv, path.string());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str().substr(0, kCsvHeader.size()), kCsvHeader);
  std::filesystem::remove(path);

  try {
    emit({physical_row()}, Format::Csv, "/nonexistent-dir/x/y.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}
