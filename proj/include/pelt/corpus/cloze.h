// Copyright 2026 The pelt Authors.
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

#ifndef PELT_CORPUS_CLOZE_H_
#define PELT_CORPUS_CLOZE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace pelt::corpus {

// One templated fact query. `text` is a marked corpus line containing a
// single [MASK] where the gold answer belongs.
struct ClozeQuery {
  std::string id;
  std::string relation;
  std::string subject_id;
  std::size_t subject_frequency = 0;
  std::string gold;
  std::string text;

  friend bool operator==(const ClozeQuery&, const ClozeQuery&) = default;
};

// Tab-separated: id, relation, subject_id, subject_frequency, gold, text.
// First line is a '#' header.
void save_cloze(const std::filesystem::path& path, const std::vector<ClozeQuery>& queries);
std::vector<ClozeQuery> load_cloze(const std::filesystem::path& path);

}  // namespace pelt::corpus

#endif  // PELT_CORPUS_CLOZE_H_
