#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "statictracker/diff.hpp"
#include "statictracker/errors.hpp"

using namespace statictracker;

namespace {

// Textbook O(n*m) longest common subsequence length.
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

std::vector<std::string> random_lines(std::mt19937& rng, int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::vector<std::string> out;
  for (int i = len(rng); i > 0; --i) out.push_back("L" + std::to_string(sym(rng)));
  return out;
}

// Every line of each side is either mapped or inside exactly one hunk, hunk
// kinds agree with their lengths, and the map is strictly increasing.
void check_structure(const DiffResult& d, const std::vector<std::string>& pre,
                     const std::vector<std::string>& post) {
  std::vector<int> pre_cover(pre.size() + 1, 0), post_cover(post.size() + 1, 0);
  for (const auto& h : d.hunks) {
    ASSERT_EQ(h.kind == HunkKind::insert, h.pre_len == 0);
    ASSERT_EQ(h.kind == HunkKind::remove, h.post_len == 0);
    for (int k = 0; k < h.pre_len; ++k) ++pre_cover[static_cast<std::size_t>(h.pre_start + k)];
    for (int k = 0; k < h.post_len; ++k) ++post_cover[static_cast<std::size_t>(h.post_start + k)];
  }
  int last_a = 0, last_b = 0;
  for (const auto& [a, b] : d.line_map) {
    ASSERT_GT(a, last_a);
    ASSERT_GT(b, last_b);
    ASSERT_EQ(pre[static_cast<std::size_t>(a - 1)], post[static_cast<std::size_t>(b - 1)]);
    ++pre_cover[static_cast<std::size_t>(a)];
    ++post_cover[static_cast<std::size_t>(b)];
    last_a = a;
    last_b = b;
  }
  for (std::size_t i = 1; i <= pre.size(); ++i) ASSERT_EQ(pre_cover[i], 1) << "pre line " << i;
  for (std::size_t i = 1; i <= post.size(); ++i) ASSERT_EQ(post_cover[i], 1) << "post line " << i;
}

}  // namespace

TEST(ComputeDiff, IdenticalTexts) {
  const DiffResult d = compute_diff("a\nb\nc\n", "a\nb\nc\n", "A.java");
  EXPECT_TRUE(d.hunks.empty());
  EXPECT_EQ(d.line_map, (std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 3}}));
  EXPECT_EQ(d.post_file_path, "A.java");
}

TEST(ComputeDiff, TwoLinesInsertedAboveWarning) {
  const auto f = fixtures::inserted_header();
  const auto& text = f.pre_files.at("demo/Holder.java");
  const DiffResult d = compute_diff(text, f.post_files.at("demo/Holder.java"), "demo/Holder.java");
  ASSERT_EQ(d.hunks.size(), 1u);
  EXPECT_EQ(d.hunks[0], (Hunk{1, 0, 1, 2, HunkKind::insert}));
  EXPECT_EQ(d.map_pre_to_post(2), 4);
}

TEST(ComputeDiff, LeadingLineDeleted) {
  const DiffResult d = compute_diff("a\nb", "b", "A.java");
  ASSERT_EQ(d.hunks.size(), 1u);
  EXPECT_EQ(d.hunks[0], (Hunk{1, 1, 1, 0, HunkKind::remove}));
  EXPECT_EQ(d.line_map, (std::vector<std::pair<int, int>>{{2, 1}}));
}

TEST(ComputeDiff, OneLineAgainstEmptyFile) {
  const DiffResult d = compute_diff("only\n", "", "A.java");
  ASSERT_EQ(d.hunks.size(), 1u);
  EXPECT_EQ(d.hunks[0].kind, HunkKind::remove);
  EXPECT_EQ(d.hunks[0].pre_len, 1);
  EXPECT_TRUE(d.line_map.empty());
}

TEST(ComputeDiff, AdjacentDeleteAndInsertFormOneReplace) {
  const DiffResult d = compute_diff("a\nb\nc\n", "a\nx\ny\nc\n", "A.java");
  ASSERT_EQ(d.hunks.size(), 1u);
  EXPECT_EQ(d.hunks[0], (Hunk{2, 1, 2, 2, HunkKind::replace}));
}

TEST(ComputeDiff, MinimalAgainstLcsOracle) {
  std::mt19937 rng(99);
  for (int round = 0; round < 1500; ++round) {
    const int alphabet = round % 3 == 0 ? 2 : 6;
    const auto pre = random_lines(rng, 30, alphabet);
    const auto post = random_lines(rng, 30, alphabet);
    const DiffResult d = compute_diff(pre, post, "F.java");
    ASSERT_EQ(d.line_map.size(), lcs_length(pre, post)) << "round " << round;
    ASSERT_EQ(d.pre_line_count, static_cast<int>(pre.size()));
    ASSERT_EQ(d.post_line_count, static_cast<int>(post.size()));
    check_structure(d, pre, post);
    ASSERT_EQ(apply_hunks(d, pre, post), post) << "round " << round;
  }
}

TEST(ComputeDiff, LongInputsStayMinimal) {
  std::mt19937 rng(5);
  auto pre = random_lines(rng, 0, 1);
  for (int i = 0; i < 600; ++i) pre.push_back("line" + std::to_string(i % 97));
  auto post = pre;
  std::uniform_int_distribution<std::size_t> pos(0, post.size() - 1);
  for (int i = 0; i < 40; ++i) post[pos(rng)] = "edit" + std::to_string(i);
  for (int i = 0; i < 20; ++i) post.insert(post.begin() + static_cast<long>(pos(rng)), "ins");
  const DiffResult d = compute_diff(pre, post, "F.java");
  EXPECT_EQ(d.line_map.size(), lcs_length(pre, post));
  check_structure(d, pre, post);
}

TEST(AnchorOffset, InsertionAboveWarning) {
  const auto f = fixtures::inserted_header();
  const DiffResult d = compute_diff(f.pre_files.at("demo/Holder.java"),
                                    f.post_files.at("demo/Holder.java"), "demo/Holder.java");
  EXPECT_EQ(anchor_offset(d, 2, Side::pre), (AnchorOffset{1, 1}));
  EXPECT_EQ(anchor_offset(d, 4, Side::post), (AnchorOffset{1, 3}));
}

TEST(AnchorOffset, NoHunksMeasuresFromLineOne) {
  const DiffResult d = compute_diff("a\nb\nc\n", "a\nb\nc\n", "A.java");
  EXPECT_EQ(anchor_offset(d, 3, Side::pre), (AnchorOffset{1, 2}));
  EXPECT_EQ(anchor_offset(d, 1, Side::post), (AnchorOffset{1, 0}));
}

TEST(AnchorOffset, OnHunkStart) {
  const DiffResult d = compute_diff("a\nb\nc\nd\n", "a\nb\nX\nd\n", "A.java");
  EXPECT_EQ(anchor_offset(d, 3, Side::pre), (AnchorOffset{3, 0}));
  EXPECT_EQ(anchor_offset(d, 4, Side::post), (AnchorOffset{3, 1}));
  EXPECT_EQ(anchor_offset(d, 2, Side::pre), (AnchorOffset{1, 1}));
}

TEST(AnchorOffset, OutOfRangeIsPrecondition) {
  const DiffResult d = compute_diff("a\nb\n", "a\n", "A.java");
  EXPECT_THROW(anchor_offset(d, 0, Side::pre), PreconditionError);
  EXPECT_THROW(anchor_offset(d, 3, Side::pre), PreconditionError);
  EXPECT_THROW(anchor_offset(d, 2, Side::post), PreconditionError);
}

TEST(RegionChange, Kinds) {
  // Line 3 replaced, lines 6-7 deleted.
  const DiffResult d = compute_diff("1\n2\n3\n4\n5\n6\n7\n8\n", "1\n2\nX\n4\n5\n8\n", "A.java");
  EXPECT_EQ(region_change_kind(d, {1, 2}), RegionChange::unchanged);
  EXPECT_EQ(region_change_kind(d, {6, 7}), RegionChange::deletions_only);
  EXPECT_EQ(region_change_kind(d, {5, 8}), RegionChange::deletions_only);
  EXPECT_EQ(region_change_kind(d, {2, 4}), RegionChange::modified);
  EXPECT_EQ(region_change_kind(d, {1, 8}), RegionChange::modified);
}

TEST(RegionChange, InsertionCountsOnlyStrictlyInside) {
  // Two lines inserted before pre line 3.
  const DiffResult d = compute_diff("1\n2\n3\n4\n", "1\n2\nA\nB\n3\n4\n", "A.java");
  EXPECT_EQ(region_change_kind(d, {2, 3}), RegionChange::modified);
  EXPECT_EQ(region_change_kind(d, {3, 4}), RegionChange::unchanged);
  EXPECT_EQ(region_change_kind(d, {1, 2}), RegionChange::unchanged);
}

TEST(RegionChange, MatchesDefinitionOnRandomDiffs) {
  std::mt19937 rng(31);
  for (int round = 0; round < 400; ++round) {
    const auto pre = random_lines(rng, 20, 4);
    const auto post = random_lines(rng, 20, 4);
    if (pre.empty()) continue;
    const DiffResult d = compute_diff(pre, post, "F.java");
    const int n = static_cast<int>(pre.size());
    std::uniform_int_distribution<int> line(1, n);
    int a = line(rng), b = line(rng);
    if (a > b) std::swap(a, b);
    bool any = false, all_delete = true;
    for (const auto& h : d.hunks) {
      const bool touches = h.pre_len > 0 ? h.pre_start <= b && a <= h.pre_end()
                                         : a < h.pre_start && h.pre_start <= b;
      if (!touches) continue;
      any = true;
      all_delete = all_delete && h.kind == HunkKind::remove;
    }
    const RegionChange expected = !any ? RegionChange::unchanged
                                  : all_delete ? RegionChange::deletions_only
                                               : RegionChange::modified;
    ASSERT_EQ(region_change_kind(d, {a, b}), expected) << "round " << round;
  }
}

TEST(ComputeDiffs, KeysFollowSides) {
  fixtures::Fixture f;
  f.pre_files = {{"Kept.java", "a\n"}, {"Gone.java", "g\n"}, {"Old.java", "o\n"}};
  f.post_files = {{"Kept.java", "a\nb\n"}, {"New.java", "n\n"}, {"Moved.java", "o\np\n"}};
  f.renames = {{"Old.java", "Moved.java"}};
  const auto l = fixtures::load(f);
  EXPECT_EQ(l.diffs.size(), 4u);
  EXPECT_EQ(l.diffs.at("Old.java").post_file_path, "Moved.java");
  EXPECT_EQ(l.diffs.at("Gone.java").post_line_count, 0);
  EXPECT_EQ(l.diffs.at("New.java").pre_line_count, 0);
  EXPECT_EQ(l.diffs.at("New.java").file_path, "New.java");
  EXPECT_THROW(l.diffs.at("Missing.java"), ConfigError);
}

TEST(ComputeDiffs, ThreadCountDoesNotChangeResult) {
  std::mt19937 rng(3);
  for (int round = 0; round < 30; ++round) {
    const auto l = fixtures::load(fixtures::random_pair(rng));
    const DiffSet serial = compute_diffs(l.pair, 1);
    const DiffSet parallel = compute_diffs(l.pair, 8);
    ASSERT_EQ(serial.size(), parallel.size());
    for (const auto& [key, d] : serial.all()) {
      ASSERT_EQ(to_json(d), to_json(parallel.at(key)));
    }
  }
}

TEST(RenderUnified, ShowsChangedLines) {
  const std::vector<std::string> pre{"a", "b", "c"};
  const std::vector<std::string> post{"a", "B", "c"};
  const std::string text = render_unified(compute_diff(pre, post, "A.java"), pre, post);
  EXPECT_NE(text.find("-b"), std::string::npos);
  EXPECT_NE(text.find("+B"), std::string::npos);
}
