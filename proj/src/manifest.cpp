#include "structok/manifest.h"

#include <set>

#include <json.hpp>

#include "structok/error.h"
#include "structok/util.h"

namespace structok {

const char* splitName(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "?";
}

std::optional<Split> splitFromName(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "validation" || name == "val") return Split::Validation;
  if (name == "test") return Split::Test;
  return std::nullopt;
}

std::vector<std::filesystem::path> DatasetManifest::pathsFor(Split split) const {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : entries)
    if (entry.split == split) paths.push_back(entry.path);
  return paths;
}

DatasetManifest loadManifest(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(readTextFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput,
                path.string() + ": " + e.what());
  }

  DatasetManifest manifest;
  manifest.name = doc.value("name", path.stem().string());
  manifest.notes = doc.value("notes", "");
  if (doc.contains("kind")) {
    std::string kind = doc["kind"].get<std::string>();
    if (kind == "onoff")
      manifest.kind = tokenizer::RepresentationKind::OnOff;
    else if (kind == "explicit")
      manifest.kind = tokenizer::RepresentationKind::ExplicitDuration;
    else
      throw Error(ErrorCode::MalformedInput,
                  "unknown representation kind '" + kind + "'");
  }

  if (!doc.contains("files") || !doc["files"].is_array())
    throw Error(ErrorCode::MalformedInput, "manifest needs a 'files' array");
  std::filesystem::path base = path.parent_path();
  std::set<std::string> seen;
  for (const auto& item : doc["files"]) {
    if (!item.contains("path") || !item.contains("split"))
      throw Error(ErrorCode::MalformedInput,
                  "manifest entries need 'path' and 'split'");
    std::filesystem::path file = item["path"].get<std::string>();
    if (file.is_relative()) file = base / file;
    auto split = splitFromName(item["split"].get<std::string>());
    if (!split)
      throw Error(ErrorCode::MalformedInput,
                  "unknown split '" + item["split"].get<std::string>() + "'");
    if (!seen.insert(file.generic_string()).second)
      throw Error(ErrorCode::MalformedInput,
                  "duplicate manifest path " + file.string());
    manifest.entries.push_back({file, *split});
  }
  return manifest;
}

void saveManifest(const DatasetManifest& manifest,
                  const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["name"] = manifest.name;
  if (!manifest.notes.empty()) doc["notes"] = manifest.notes;
  if (manifest.kind)
    doc["kind"] = tokenizer::kindName(*manifest.kind);
  auto files = nlohmann::json::array();
  std::filesystem::path base = path.parent_path();
  for (const auto& entry : manifest.entries) {
    nlohmann::json item;
    std::filesystem::path rel = entry.path.lexically_proximate(base);
    item["path"] = rel.generic_string();
    item["split"] = splitName(entry.split);
    files.push_back(item);
  }
  doc["files"] = files;
  writeTextFile(path, doc.dump(2) + "\n");
}

}  // namespace structok
