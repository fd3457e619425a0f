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

#include "pelt/corpus/cloze.h"

#include <fstream>

#include "pelt/common/error.h"
#include "pelt/corpus/catalog.h"

namespace pelt::corpus {

void save_cloze(const std::filesystem::path& path, const std::vector<ClozeQuery>& queries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write cloze set '" + path.string() + "'");
  out << "# id\trelation\tsubject_id\tsubject_frequency\tgold\ttext\n";
  for (const auto& q : queries) {
    out << q.id << '\t' << q.relation << '\t' << q.subject_id << '\t'
        << q.subject_frequency << '\t' << q.gold << '\t' << q.text << '\n';
  }
}

std::vector<ClozeQuery> load_cloze(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read cloze set '" + path.string() + "'");
  std::vector<ClozeQuery> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() != 6) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 6 tab-separated fields");
    }
    ClozeQuery q;
    q.id = f[0];
    q.relation = f[1];
    q.subject_id = f[2];
    try {
      q.subject_frequency = std::stoul(f[3]);
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": bad subject frequency '" + f[3] + "'");
    }
    q.gold = f[4];
    q.text = f[5];
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace pelt::corpus
