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

#ifndef PELT_LINKER_LINKER_H_
#define PELT_LINKER_LINKER_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pelt::linker {

struct Page {
  std::string id;
  std::string title;
  // Title first, then the listed aliases, as written.
  std::vector<std::string> aliases;
};

struct Edge {
  std::string source;
  std::string target;
  std::string kind;
};

// Character span [start, end) of the document's plain text.
struct Anchor {
  std::string page_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
};

struct Candidate {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Anchor> anchors;
  std::vector<Candidate> candidates;
};

// Pages, edges and documents read from the line-oriented graph format:
//   PAGE <tab> id <tab> title [<tab> alias]...
//   EDGE <tab> source <tab> target <tab> kind
//   DOC  <tab> id <tab> text with [[page_id|anchor]] and {{candidate}}
// Blank lines and lines starting with '#' are ignored.
class PageGraph {
 public:
  void add_page(Page page);
  void add_edge(Edge edge);
  void add_document(Document doc);

  bool has_page(const std::string& id) const { return index_.contains(id); }
  const Page& page(const std::string& id) const;
  const std::vector<Page>& pages() const { return pages_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Document>& documents() const { return documents_; }
  // Pages joined to `id` by an edge in either direction.
  const std::set<std::string>& neighbors(const std::string& id) const;

 private:
  std::vector<Page> pages_;
  std::map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::map<std::string, std::set<std::string>> adjacency_;
  std::vector<Document> documents_;
};

// Throws ParseError with the line number on malformed records or markup and
// on references to unknown pages.
PageGraph parse_page_graph(std::string_view text);
PageGraph load_page_graph(const std::filesystem::path& path);

// Parses one DOC body into plain text, anchors and candidates.
Document parse_document(const std::string& id, std::string_view marked);

// ASCII lowercase and runs of whitespace collapsed to one space, trimmed.
std::string normalize_alias(std::string_view alias);

// Normalized alias -> sorted page ids.
using AliasTable = std::map<std::string, std::vector<std::string>>;
AliasTable build_alias_table(const PageGraph& graph);

struct SimpleLink {
  enum class Kind { kUnique, kAmbiguous, kNone };
  Kind kind = Kind::kNone;
  std::vector<std::string> pages;
};

SimpleLink link_simple(std::string_view name, const AliasTable& aliases);

struct Round {
  std::size_t index = 0;
  std::set<std::string> frontier;   // S
  std::set<std::string> neighbors;  // S'
  // Candidate indices assigned in this round, ascending.
  std::vector<std::size_t> assigned;
};

struct Link {
  std::string page_id;
  std::size_t round = 0;
};

struct LinkAssignment {
  // Candidate index -> assigned page.
  std::map<std::size_t, Link> links;
  std::vector<std::size_t> unresolved;
  std::vector<Round> trace;
};

// Iterative disambiguation. S starts as the anchor pages; each round
// S' = neighbors(S), every open candidate whose alias matches exactly one
// page of S' is assigned (all matches are decided before any assignment),
// and S becomes the pages just assigned. Stops when S is empty.
LinkAssignment link_iterate(const Document& doc, const PageGraph& graph,
                            const AliasTable& aliases);

// Rows: doc, "start:end:surface", page or UNRESOLVED, round (0 if
// unresolved), in candidate order.
std::string format_links_tsv(const Document& doc, const LinkAssignment& assignment);
// Rows: doc, round, S, S', assigned surfaces (comma separated).
std::string format_trace_tsv(const Document& doc, const LinkAssignment& assignment);

}  // namespace pelt::linker

#endif  // PELT_LINKER_LINKER_H_
