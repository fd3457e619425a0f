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

#include "pelt/linker/linker.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pelt/common/error.h"
#include "pelt/corpus/catalog.h"

namespace pelt::linker {

void PageGraph::add_page(Page page) {
  if (page.id.empty()) throw ParseError("page with empty id");
  if (index_.contains(page.id)) throw ParseError("duplicate page '" + page.id + "'");
  if (page.aliases.empty() || page.aliases.front() != page.title) {
    page.aliases.insert(page.aliases.begin(), page.title);
  }
  index_.emplace(page.id, pages_.size());
  adjacency_[page.id];
  pages_.push_back(std::move(page));
}

void PageGraph::add_edge(Edge edge) {
  for (const auto* end : {&edge.source, &edge.target}) {
    if (!has_page(*end)) throw ParseError("edge references unknown page '" + *end + "'");
  }
  adjacency_[edge.source].insert(edge.target);
  adjacency_[edge.target].insert(edge.source);
  edges_.push_back(std::move(edge));
}

void PageGraph::add_document(Document doc) {
  for (const auto& a : doc.anchors) {
    if (!has_page(a.page_id)) {
      throw ParseError("document '" + doc.id + "' anchors unknown page '" + a.page_id + "'");
    }
  }
  documents_.push_back(std::move(doc));
}

const Page& PageGraph::page(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw IndexError("unknown page '" + id + "'");
  return pages_[it->second];
}

const std::set<std::string>& PageGraph::neighbors(const std::string& id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw IndexError("unknown page '" + id + "'");
  return it->second;
}

Document parse_document(const std::string& id, std::string_view marked) {
  Document doc;
  doc.id = id;
  std::size_t pos = 0;
  while (pos < marked.size()) {
    const std::size_t anchor = marked.find("[[", pos);
    const std::size_t candidate = marked.find("{{", pos);
    const std::size_t next = std::min(anchor, candidate);
    doc.text.append(marked.substr(pos, next == std::string_view::npos ? marked.npos : next - pos));
    if (next == std::string_view::npos) break;
    if (next == anchor) {
      const std::size_t close = marked.find("]]", next + 2);
      const std::size_t bar = marked.find('|', next + 2);
      if (close == std::string_view::npos || bar == std::string_view::npos || bar > close) {
        throw ParseError("document '" + id + "': malformed anchor at offset " +
                         std::to_string(next));
      }
      Anchor a;
      a.page_id = std::string(marked.substr(next + 2, bar - next - 2));
      a.surface = std::string(marked.substr(bar + 1, close - bar - 1));
      a.start = doc.text.size();
      doc.text += a.surface;
      a.end = doc.text.size();
      doc.anchors.push_back(std::move(a));
      pos = close + 2;
    } else {
      const std::size_t close = marked.find("}}", next + 2);
      if (close == std::string_view::npos) {
        throw ParseError("document '" + id + "': unterminated candidate at offset " +
                         std::to_string(next));
      }
      Candidate c;
      c.surface = std::string(marked.substr(next + 2, close - next - 2));
      if (c.surface.empty()) throw ParseError("document '" + id + "': empty candidate");
      c.start = doc.text.size();
      doc.text += c.surface;
      c.end = doc.text.size();
      doc.candidates.push_back(std::move(c));
      pos = close + 2;
    }
  }
  return doc;
}

PageGraph parse_page_graph(std::string_view text) {
  PageGraph graph;
  std::vector<std::pair<std::size_t, Edge>> edges;
  std::vector<std::pair<std::size_t, Document>> docs;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [&](const std::string& what) {
    throw ParseError("page graph line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = corpus::split_tabs(line);
    if (f[0] == "PAGE") {
      if (f.size() < 3 || f[1].empty() || f[2].empty()) fail("PAGE needs id and title");
      Page page{f[1], f[2], {}};
      for (std::size_t i = 3; i < f.size(); ++i) {
        if (!f[i].empty()) page.aliases.push_back(f[i]);
      }
      try {
        graph.add_page(std::move(page));
      } catch (const ParseError& e) {
        fail(e.what());
      }
    } else if (f[0] == "EDGE") {
      if (f.size() != 4) fail("EDGE needs source, target and kind");
      edges.emplace_back(line_no, Edge{f[1], f[2], f[3]});
    } else if (f[0] == "DOC") {
      if (f.size() != 3) fail("DOC needs id and text");
      try {
        docs.emplace_back(line_no, parse_document(f[1], f[2]));
      } catch (const ParseError& e) {
        fail(e.what());
      }
    } else {
      fail("unknown record type '" + f[0] + "'");
    }
  }
  // Edges and documents may precede the pages they reference.
  for (auto& [no, edge] : edges) {
    line_no = no;
    try {
      graph.add_edge(std::move(edge));
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  for (auto& [no, doc] : docs) {
    line_no = no;
    try {
      graph.add_document(std::move(doc));
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  return graph;
}

PageGraph load_page_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read page graph '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_page_graph(buf.str());
}

std::string normalize_alias(std::string_view alias) {
  std::string out;
  bool pending_space = false;
  for (char ch : alias) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
  }
  return out;
}

AliasTable build_alias_table(const PageGraph& graph) {
  AliasTable table;
  for (const auto& page : graph.pages()) {
    for (const auto& alias : page.aliases) {
      auto& ids = table[normalize_alias(alias)];
      if (std::find(ids.begin(), ids.end(), page.id) == ids.end()) ids.push_back(page.id);
    }
  }
  for (auto& [alias, ids] : table) std::sort(ids.begin(), ids.end());
  return table;
}

SimpleLink link_simple(std::string_view name, const AliasTable& aliases) {
  auto it = aliases.find(normalize_alias(name));
  if (it == aliases.end()) return {};
  return {it->second.size() == 1 ? SimpleLink::Kind::kUnique : SimpleLink::Kind::kAmbiguous,
          it->second};
}

LinkAssignment link_iterate(const Document& doc, const PageGraph& graph,
                            const AliasTable& aliases) {
  LinkAssignment out;
  std::set<std::size_t> open;
  for (std::size_t i = 0; i < doc.candidates.size(); ++i) open.insert(i);
  std::set<std::string> frontier;
  for (const auto& a : doc.anchors) frontier.insert(a.page_id);

  for (std::size_t round = 1; !frontier.empty(); ++round) {
    Round r;
    r.index = round;
    r.frontier = frontier;
    for (const auto& p : frontier) {
      const auto& n = graph.neighbors(p);
      r.neighbors.insert(n.begin(), n.end());
    }
    // Decide every match against the whole of S' first.
    std::vector<std::pair<std::size_t, std::string>> matched;
    for (std::size_t c : open) {
      auto it = aliases.find(normalize_alias(doc.candidates[c].surface));
      if (it == aliases.end()) continue;
      const std::string* unique = nullptr;
      std::size_t hits = 0;
      for (const auto& page : it->second) {
        if (r.neighbors.contains(page)) {
          ++hits;
          unique = &page;
        }
      }
      if (hits == 1) matched.emplace_back(c, *unique);
    }
    frontier.clear();
    for (auto& [c, page] : matched) {
      open.erase(c);
      r.assigned.push_back(c);
      frontier.insert(page);
      out.links.emplace(c, Link{std::move(page), round});
    }
    out.trace.push_back(std::move(r));
  }
  out.unresolved.assign(open.begin(), open.end());
  return out;
}

namespace {

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out.empty() ? "-" : out;
}

}  // namespace

std::string format_links_tsv(const Document& doc, const LinkAssignment& assignment) {
  std::ostringstream out;
  for (std::size_t i = 0; i < doc.candidates.size(); ++i) {
    const auto& c = doc.candidates[i];
    out << doc.id << '\t' << c.start << ':' << c.end << ':' << c.surface << '\t';
    auto it = assignment.links.find(i);
    if (it == assignment.links.end()) {
      out << "UNRESOLVED\t0\n";
    } else {
      out << it->second.page_id << '\t' << it->second.round << '\n';
    }
  }
  return out.str();
}

std::string format_trace_tsv(const Document& doc, const LinkAssignment& assignment) {
  std::ostringstream out;
  for (const auto& r : assignment.trace) {
    std::string assigned;
    for (std::size_t c : r.assigned) {
      assigned += (assigned.empty() ? "" : ",") + doc.candidates[c].surface;
    }
    out << doc.id << '\t' << r.index << '\t' << join(r.frontier) << '\t' << join(r.neighbors)
        << '\t' << (assigned.empty() ? "-" : assigned) << '\n';
  }
  return out.str();
}

}  // namespace pelt::linker
