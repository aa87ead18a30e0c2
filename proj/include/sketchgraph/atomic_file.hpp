#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sketchgraph/geometry.hpp"

namespace sketchgraph {

/// An input path that does not exist.
class FileNotFound : public Error {
public:
  explicit FileNotFound(const std::filesystem::path& path)
      : Error("no such file: " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Throws FileNotFound unless path names an existing regular file.
void require_file(const std::filesystem::path& path);

/// Writes to "<path>.tmp" and renames over path, so a failed write never
/// leaves a partial file behind. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

} // namespace sketchgraph
