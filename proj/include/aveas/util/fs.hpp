// Copyright 2026 The aveas-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AVEAS_UTIL_FS_HPP_
#define AVEAS_UTIL_FS_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace aveas::util {

// Reads a whole file; throws IoError with the path on failure.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, fsyncs, then renames over the target so a
// crash never leaves a half-written file under the final name.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view bytes);

// Advisory whole-file lock (flock). Blocks until acquired; released on
// destruction. The lock file itself stays behind, which is harmless.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();

  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace aveas::util

#endif  // AVEAS_UTIL_FS_HPP_
