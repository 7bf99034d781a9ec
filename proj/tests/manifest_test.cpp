// Tests for manifest loading, saving and validation.

#include "structok/manifest.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "structok/error.h"
#include "structok/util.h"

namespace structok {
namespace {

namespace fs = std::filesystem;

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "structok_manifest_test";
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    auto path = dir_ / name;
    writeTextFile(path, text);
    return path;
  }

  fs::path dir_;
};

TEST_F(ManifestTest, LoadResolvesRelativePaths) {
  auto path = write("m.json", R"({
    "name": "demo",
    "kind": "explicit",
    "files": [
      {"path": "a.mid", "split": "train"},
      {"path": "sub/b.mid", "split": "validation"},
      {"path": "c.mid", "split": "test"}
    ]
  })");
  auto manifest = loadManifest(path);
  EXPECT_EQ(manifest.name, "demo");
  ASSERT_TRUE(manifest.kind.has_value());
  EXPECT_EQ(*manifest.kind, tokenizer::RepresentationKind::ExplicitDuration);
  ASSERT_EQ(manifest.entries.size(), 3u);
  EXPECT_EQ(manifest.entries[0].path, dir_ / "a.mid");
  EXPECT_EQ(manifest.entries[1].path, dir_ / "sub" / "b.mid");
  EXPECT_EQ(manifest.pathsFor(Split::Train).size(), 1u);
  EXPECT_EQ(manifest.pathsFor(Split::Validation).size(), 1u);
  EXPECT_EQ(manifest.pathsFor(Split::Test).size(), 1u);
}

TEST_F(ManifestTest, SaveLoadRoundTrip) {
  DatasetManifest manifest;
  manifest.name = "rt";
  manifest.notes = "notes";
  manifest.entries = {{dir_ / "x.mid", Split::Train},
                      {dir_ / "y.mid", Split::Test}};
  auto path = dir_ / "rt.json";
  saveManifest(manifest, path);
  auto loaded = loadManifest(path);
  EXPECT_EQ(loaded.name, "rt");
  EXPECT_EQ(loaded.notes, "notes");
  ASSERT_EQ(loaded.entries.size(), 2u);
  EXPECT_EQ(loaded.entries[0].path, dir_ / "x.mid");
  EXPECT_EQ(loaded.entries[1].split, Split::Test);
}

TEST_F(ManifestTest, DuplicatePathRejected) {
  auto path = write("dup.json", R"({
    "files": [
      {"path": "a.mid", "split": "train"},
      {"path": "a.mid", "split": "test"}
    ]
  })");
  try {
    loadManifest(path);
    FAIL() << "expected MalformedInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedInput);
  }
}

TEST_F(ManifestTest, UnknownSplitRejected) {
  auto path = write("bad.json", R"({
    "files": [{"path": "a.mid", "split": "holdout"}]
  })");
  EXPECT_THROW(loadManifest(path), Error);
}

TEST_F(ManifestTest, MalformedJsonRejected) {
  auto path = write("nj.json", "{not json");
  EXPECT_THROW(loadManifest(path), Error);
}

TEST_F(ManifestTest, ValAliasAccepted) {
  auto path = write("val.json", R"({
    "files": [{"path": "a.mid", "split": "val"}]
  })");
  auto manifest = loadManifest(path);
  EXPECT_EQ(manifest.entries[0].split, Split::Validation);
}

}  // namespace
}  // namespace structok
