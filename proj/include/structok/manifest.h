// Dataset manifest: a JSON file naming MIDI paths and their train /
// validation / test split. Relative paths resolve against the manifest's
// directory.

#ifndef STRUCTOK_MANIFEST_H_
#define STRUCTOK_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "structok/tokenizer.h"

namespace structok {

enum class Split { Train, Validation, Test };

const char* splitName(Split split);
std::optional<Split> splitFromName(const std::string& name);

struct ManifestEntry {
  std::filesystem::path path;
  Split split = Split::Train;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;
  std::optional<tokenizer::RepresentationKind> kind;
  std::string notes;

  std::vector<std::filesystem::path> pathsFor(Split split) const;
};

DatasetManifest loadManifest(const std::filesystem::path& path);
void saveManifest(const DatasetManifest& manifest,
                  const std::filesystem::path& path);

}  // namespace structok

#endif  // STRUCTOK_MANIFEST_H_
