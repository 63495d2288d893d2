#include <hyperfuse/protocol.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace {

using namespace hyperfuse;

std::string golden_path(const std::string& name) {
  return std::string(HYPERFUSE_GOLDEN_DIR) + "/" + name;
}

nlohmann::json load_golden(const std::string& name) {
  std::ifstream file(golden_path(name));
  if (!file.is_open()) throw std::runtime_error("missing golden " + name);
  return nlohmann::json::parse(file);
}

TEST(Goldens, TwoFusionReportsMatch) {
  for (const auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2},
                            std::pair{3, 3}}) {
    const std::string name =
        "fuse_" + std::to_string(n) + "_" + std::to_string(m) + ".json";
    const nlohmann::json fresh = run_to_json(run_two_fusion(n, m));
    EXPECT_EQ(fresh, load_golden(name)) << name;
  }
}

TEST(Goldens, ThreeFusionReportMatches) {
  const nlohmann::json fresh = run_to_json(run_three_fusion(2, 2, 2));
  EXPECT_EQ(fresh, load_golden("fuse_2_2_2.json"));
}

TEST(Goldens, ReportSerializationIsByteStable) {
  const std::string a = run_to_json(run_two_fusion(3, 3)).dump(2);
  const std::string b = run_to_json(run_two_fusion(3, 3)).dump(2);
  EXPECT_EQ(a, b);
}

TEST(Goldens, ReportRowsCarryTheContractFields) {
  const nlohmann::json j = load_golden("fuse_2_2.json");
  ASSERT_TRUE(j.contains("reports"));
  ASSERT_FALSE(j.at("reports").empty());
  for (const auto& row : j.at("reports")) {
    for (const char* key : {"class", "pattern", "feedforward", "label",
                            "probability", "fidelity"})
      EXPECT_TRUE(row.contains(key)) << key;
  }
  EXPECT_EQ(j.at("scheme"), 2);
  EXPECT_FALSE(j.contains("t"));
  EXPECT_EQ(load_golden("fuse_2_2_2.json").at("t"), 2);
}

TEST(Goldens, GoldenProbabilitiesAreConsistent) {
  // spot-check the stored numbers against the closed forms
  const nlohmann::json j = load_golden("fuse_2_2.json");
  double total = 0.0;
  for (const auto& row : j.at("classes")) {
    total += row.at("probability").get<double>();
    if (row.at("label") == "success")
      EXPECT_NEAR(row.at("probability").get<double>(), 0.25, 1e-12);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
