#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "richardson/spec_document.hpp"

using namespace richardson;

TEST(SpecDocument, PresetsExpand) {
  const SpecDocument p21 = load_spec_document("prop21");
  EXPECT_EQ(p21.family, "ladder");
  EXPECT_EQ(predicted_region(p21.spec).to_string(), "{2}");
  EXPECT_EQ(p21.experiment.lambdas, (std::vector<double>{1, 1.5, 2, 2.5, 3}));
  EXPECT_EQ(p21.experiment.levels, (std::vector<int>{1, 2, 3}));

  EXPECT_EQ(predicted_region(load_spec_document("prop22").spec).to_string(), "[2,5]");

  const SpecDocument pts = load_spec_document("points:2,4");
  EXPECT_EQ(pts.family, "multispine");
  EXPECT_EQ(pts.experiment.lambdas, (std::vector<double>{1.3, 2, 3, 4, 5}));
  EXPECT_EQ(predicted_region(pts.spec).to_string(), "{2,4}");

  const SpecDocument iv = load_spec_document("interval:2,5");
  EXPECT_EQ(predicted_region(iv.spec).to_string(), "[2,5]");
  EXPECT_EQ(std::get<LadderSpec>(iv.spec).rule.gamma, 4.0);
  EXPECT_EQ(std::get<LadderSpec>(iv.spec).rule.beta, 1.0);

  EXPECT_EQ(load_spec_document("countable:1.5,2.5").family, "countable");
  EXPECT_THROW(load_spec_document("interval:3,2"), SpecError);
  EXPECT_THROW(load_spec_document("bogus:1"), SpecError);
  EXPECT_THROW(load_spec_document("no_such_file.json"), SpecError);
}

TEST(SpecDocument, DefaultsAndHash) {
  const SpecDocument a = parse_spec_document(json{{"family", "ladder"}});
  const SpecDocument b = parse_spec_document(json{{"family", "ladder"}, {"gamma", 2.0}, {"threads", 4}});
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.hash.size(), 16u);
  const SpecDocument c = parse_spec_document(json{{"family", "ladder"}, {"seed", 7}});
  EXPECT_NE(a.hash, c.hash);
  EXPECT_EQ(a.experiment.reps, 2000u);
  EXPECT_EQ(a.experiment.init, "canonical");
}

TEST(SpecDocument, Rejections) {
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"gama", 2}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "tree"}}), SpecError);
  EXPECT_THROW(parse_spec_document(json::array()), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"lambdas", {2, 1}}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"lambdas", {0, 1}}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"levels", {4}}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"reps", 0}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"correction", "plus"}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"gamma", "two"}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "multispine"}, {"k", 0}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "multispine"}, {"k", 2}, {"alphas", {2}}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "countable"}, {"alphas", {2, 1.5, 3}}}), SpecError);
  EXPECT_THROW(parse_spec_document(json{{"family", "ladder"}, {"init", "sideways"}}), SpecError);
}

TEST(SpecDocument, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "richardson_spec_test.json";
  {
    std::ofstream f(path);
    f << R"({"family": "multispine", "k": 1, "alphas": [3], "b": {"list": [16, 64]}, "tail": 4, "reps": 5})";
  }
  const SpecDocument d = load_spec_document(path.string());
  EXPECT_EQ(std::get<MultiSpineSpec>(d.spec).b.values(), (std::vector<std::int64_t>{16, 64}));
  EXPECT_EQ(d.experiment.levels, (std::vector<int>{1, 2}));
  EXPECT_EQ(d.experiment.reps, 5u);
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  EXPECT_THROW(load_spec_document(path.string()), SpecError);
  std::filesystem::remove(path);
}
