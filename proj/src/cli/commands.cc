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

#include "pelt/cli/commands.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pelt/common/binary_io.h"
#include "pelt/common/error.h"
#include "pelt/corpus/cloze.h"
#include "pelt/corpus/generator.h"
#include "pelt/corpus/occurrences.h"
#include "pelt/corpus/sentence.h"
#include "pelt/linker/linker.h"
#include "pelt/lookup/build.h"
#include "pelt/lookup/oracle.h"
#include "pelt/lookup/table.h"
#include "pelt/model/checkpoint.h"
#include "pelt/model/gradcheck.h"
#include "pelt/model/train.h"
#include "pelt/probe/probe.h"

namespace pelt::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void provenance(std::ostream& out, const RunConfig& c,
                std::initializer_list<std::pair<const char*, std::string>> extra = {}) {
  out << "# pelt " << kVersion << " " << c.command << " seed=" << c.seed
      << " threads=" << c.threads;
  for (const auto& [key, value] : extra) out << ' ' << key << '=' << value;
  out << '\n';
}

fs::path or_default(const fs::path& given, const fs::path& fallback) {
  return given.empty() ? fallback : given;
}

fs::path require(const fs::path& given, const char* flag) {
  if (given.empty()) throw ConfigError(std::string("missing required option ") + flag);
  return given;
}

fs::path corpus_file(const RunConfig& c, const char* name) { return c.corpus_dir / name; }

// Vocabulary beside the given file, else in the corpus directory.
corpus::Vocabulary vocab_near(const RunConfig& c, const fs::path& anchor) {
  if (!c.vocab.empty()) return corpus::Vocabulary::load(c.vocab);
  const fs::path beside = anchor.parent_path() / corpus::CorpusFiles::kVocab;
  if (!anchor.empty() && fs::exists(beside)) return corpus::Vocabulary::load(beside);
  return corpus::Vocabulary::load(corpus_file(c, corpus::CorpusFiles::kVocab));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

struct LoadedModel {
  model::Checkpoint checkpoint;
  Digest fingerprint;
  std::string hex;
};

LoadedModel load_model(const RunConfig& c) {
  LoadedModel m{model::load_checkpoint(require(c.checkpoint, "--ckpt")), {}, {}};
  m.fingerprint = model::fingerprint(m.checkpoint);
  m.hex = to_hex(m.fingerprint);
  return m;
}

std::vector<std::string> catalog_ids(const corpus::EntityCatalog& catalog) {
  std::vector<std::string> ids;
  for (const auto& e : catalog.entities()) ids.push_back(e.id);
  return ids;
}

lookup::Directions directions_for(const RunConfig& c, const LoadedModel& m) {
  const fs::path lookup_path = or_default(c.lookup, corpus_file(c, corpus::CorpusFiles::kLookup));
  const auto vocab = vocab_near(c, lookup_path);
  const auto catalog = corpus::EntityCatalog::load(lookup_path.parent_path() /
                                                   corpus::CorpusFiles::kCatalog);
  const auto sentences = corpus::load_corpus(lookup_path, vocab);
  return lookup::compute_directions(m.checkpoint.model, catalog_ids(catalog), sentences, c.cap,
                                    lookup_path.filename().stem().string(), c.threads);
}

}  // namespace

int cmd_gen_corpus(const RunConfig& c, std::ostream& out) {
  provenance(out, c);
  corpus::CorpusConfig config;
  config.entities = c.entities;
  config.zipf_exponent = c.zipf;
  config.mention_budget = c.budget;
  config.zero_frequency_tail = c.zero_tail;
  config.seed = c.seed;
  const auto generated = corpus::generate_corpus(config);
  const fs::path dir = or_default(c.out, c.corpus_dir);
  corpus::write_corpus(generated, dir);
  out << "wrote " << dir.string() << ": vocab " << generated.vocab.size() << ", entities "
      << generated.catalog.size() << ", train " << generated.train.size() << ", lookup "
      << generated.lookup.size() << ", cloze " << generated.cloze.size() << '\n';
  return 0;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  const auto vocab = corpus::Vocabulary::load(corpus_file(c, corpus::CorpusFiles::kVocab));
  const auto sentences = corpus::load_corpus(corpus_file(c, corpus::CorpusFiles::kTrain), vocab);
  model::ModelConfig config;
  config.dim = c.dim;
  config.layers = c.layers;
  config.heads = c.heads;
  config.ffn_mult = c.ffn_mult;
  config.max_len = c.max_len;
  config.vocab = vocab.size();
  config.seed = c.seed;
  model::TrainOptions options;
  options.steps = c.steps;
  options.batch_size = c.batch;
  options.lr = c.lr;
  options.threads = c.threads;
  options.log_every = c.log_every;
  provenance(out, c, {{"steps", std::to_string(c.steps)}, {"lr", sci(c.lr)}});
  const auto result = model::train_mlm(sentences, config, options, [&](const auto& p) {
    out << "step " << p.step << " loss " << fixed(p.loss, 4) << '\n' << std::flush;
  });
  const fs::path path = or_default(c.out, c.corpus_dir / "model.ckpt");
  model::save_checkpoint(path, result.checkpoint);
  out << "wrote " << path.string() << " model=" << to_hex(model::fingerprint(result.checkpoint))
      << '\n';
  return 0;
}

int cmd_build_table(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  provenance(out, c, {{"model", m.hex}, {"L", fixed(c.norm, 3)}, {"cap", std::to_string(c.cap)}});
  const auto directions = directions_for(c, m);
  const auto table = lookup::table_from_directions(directions, c.norm, m.fingerprint,
                                                   m.checkpoint.model.config().dim);
  const fs::path path = or_default(c.out, c.corpus_dir / "table.bin");
  lookup::save_table(path, table);
  for (const auto& id : directions.skipped) out << "skipped " << id << ": no occurrences\n";
  out << "wrote " << path.string() << ": " << table.size() << " entries, "
      << directions.skipped.size() << " skipped\n";
  return 0;
}

int cmd_probe(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  const fs::path cloze_path = or_default(c.cloze, corpus_file(c, corpus::CorpusFiles::kCloze));
  const auto vocab = vocab_near(c, cloze_path);
  const auto queries = corpus::load_cloze(cloze_path);
  std::optional<lookup::EntityEmbeddingTable> table;
  if (!c.table.empty()) table = lookup::load_table_for(c.table, m.fingerprint);
  if (table) {
    provenance(out, c, {{"model", m.hex}, {"table", to_hex(sha256(lookup::serialize_table(*table)))}});
  } else {
    provenance(out, c, {{"model", m.hex}});
  }
  probe::ProbeOptions options{c.restrict_candidates, c.threads};
  const auto vanilla =
      probe::run_probe(queries, vocab, m.checkpoint.model, m.fingerprint, nullptr, options);
  out << probe::format_report(vanilla);
  std::string tsv = probe::format_tsv(vanilla);
  std::size_t rejected = vanilla.rejected.size();
  if (table) {
    const auto infused =
        probe::run_probe(queries, vocab, m.checkpoint.model, m.fingerprint, &*table, options);
    out << '\n' << probe::format_report(infused);
    out << "\n" << "bucket              vanilla   infused   gain\n";
    for (std::size_t b = 0; b < corpus::kBucketCount; ++b) {
      const double v = vanilla.bucket_mean_p1[b];
      const double i = infused.bucket_mean_p1[b];
      char line[128];
      std::snprintf(line, sizeof(line), "%-20s%-10.4f%-10.4f%+.4f\n",
                    std::string(corpus::bucket_label(b)).c_str(), v, i, i - v);
      out << line;
    }
    tsv += probe::format_tsv(infused);
  }
  if (!c.tsv.empty()) write_text(c.tsv, tsv);
  return c.strict && rejected > 0 ? 1 : 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  const fs::path cloze_path = or_default(c.cloze, corpus_file(c, corpus::CorpusFiles::kCloze));
  const auto vocab = vocab_near(c, cloze_path);
  const auto queries = corpus::load_cloze(cloze_path);
  const auto norms = probe::parse_norms(c.norms);
  provenance(out, c, {{"model", m.hex}, {"l", c.norms}});
  const auto directions = directions_for(c, m);
  probe::ProbeOptions options{c.restrict_candidates, c.threads};
  const auto sweep = probe::sweep_norm(queries, vocab, m.checkpoint.model, m.fingerprint,
                                       directions, norms, options);
  out << probe::format_sweep(sweep);
  if (!c.tsv.empty()) write_text(c.tsv, probe::format_sweep_tsv(sweep));
  if (!c.out.empty()) {
    const auto table = lookup::table_from_directions(directions, sweep.selected, m.fingerprint,
                                                     m.checkpoint.model.config().dim);
    lookup::save_table(c.out, table);
    out << "wrote " << c.out.string() << " at L " << fixed(sweep.selected, 3) << '\n';
  }
  return 0;
}

int cmd_link(const RunConfig& c, std::ostream& out) {
  const fs::path path = require(c.graph, "--graph");
  const auto graph = linker::load_page_graph(path);
  const Bytes raw = read_file(path);
  provenance(out, c, {{"graph", to_hex(sha256(raw))}});
  const auto aliases = linker::build_alias_table(graph);
  std::string links;
  std::string trace;
  for (const auto& doc : graph.documents()) {
    const auto assignment = linker::link_iterate(doc, graph, aliases);
    links += linker::format_links_tsv(doc, assignment);
    trace += linker::format_trace_tsv(doc, assignment);
  }
  out << links;
  if (c.trace) out << "# trace: doc round S S' assigned\n" << trace;
  if (!c.tsv.empty()) write_text(c.tsv, c.trace ? links + trace : links);
  return 0;
}

int cmd_gradcheck(const RunConfig& c, std::ostream& out) {
  provenance(out, c, {{"vocab", std::to_string(c.vocab_size)}, {"h", sci(c.h)}});
  model::MlmGradCheckSetup setup;
  setup.vocab = c.vocab_size;
  setup.seed = c.seed;
  numerics::GradCheckOptions options;
  options.step = c.h;
  options.samples = c.samples;
  options.seed = c.seed;
  options.floor = model::kMlmGradCheckFloor;
  const auto r = model::check_mlm_gradients(setup, options);
  const bool pass = r.max_relative_error <= c.tolerance;
  std::ostringstream report;
  report << "coordinates\t" << r.coordinates_checked << '\n'
         << "max_relative_error\t" << sci(r.max_relative_error) << '\n'
         << "worst\t" << r.worst_parameter << '[' << r.worst_index << "]\tanalytic "
         << sci(r.worst_analytic) << "\tnumeric " << sci(r.worst_numeric) << '\n'
         << "tolerance\t" << sci(c.tolerance) << '\t' << (pass ? "PASS" : "FAIL") << '\n';
  out << report.str();
  if (!c.tsv.empty()) write_text(c.tsv, report.str());
  return pass ? 0 : 1;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  const auto m = load_model(c);
  provenance(out, c, {{"model", m.hex}});
  const fs::path lookup_path = or_default(c.lookup, corpus_file(c, corpus::CorpusFiles::kLookup));
  const auto vocab = vocab_near(c, lookup_path);
  const auto catalog =
      corpus::EntityCatalog::load(lookup_path.parent_path() / corpus::CorpusFiles::kCatalog);
  const std::string entity = c.entity.empty() ? catalog.entities().at(0).id : c.entity;
  if (!catalog.contains(entity)) throw IndexError("unknown entity '" + entity + "'");
  const auto sentences = corpus::load_corpus(lookup_path, vocab);
  const auto set = corpus::index_occurrences(entity, sentences, c.cap, "lookup");
  if (set.empty()) throw NoOccurrencesError("entity '" + entity + "' has no occurrences");

  lookup::OracleOptions options;
  options.seed = c.seed;
  if (c.partition_size > 0) {
    if (c.partition_size > vocab.size() - corpus::kSpecialCount) {
      throw ConfigError("--partition-size exceeds the ordinary vocabulary");
    }
    for (std::size_t i = 0; i < c.partition_size; ++i) {
      options.partition.push_back(static_cast<corpus::TokenId>(corpus::kSpecialCount + i));
    }
  }
  const auto r = lookup::gradient_direction_oracle(m.checkpoint.model.cast<double>(), set, options);
  std::ostringstream report;
  report << "entity\t" << entity << '\n'
         << "occurrences\t" << r.occurrences << '\n'
         << "partition\t" << r.partition_size << '\n'
         << "surrogate_max_deviation\t" << sci(r.surrogate_max_deviation) << '\n'
         << "full_cosine\t" << fixed(r.full_cosine, 6) << '\n';
  out << report.str();
  if (!c.tsv.empty()) write_text(c.tsv, report.str());
  return 0;
}

int run_command(const RunConfig& c, std::ostream& out) {
  if (c.threads == 0) throw ConfigError("--threads must be at least 1");
  if (c.command == "gen-corpus") return cmd_gen_corpus(c, out);
  if (c.command == "train") return cmd_train(c, out);
  if (c.command == "build-table") return cmd_build_table(c, out);
  if (c.command == "probe") return cmd_probe(c, out);
  if (c.command == "sweep") return cmd_sweep(c, out);
  if (c.command == "link") return cmd_link(c, out);
  if (c.command == "gradcheck") return cmd_gradcheck(c, out);
  if (c.command == "oracle") return cmd_oracle(c, out);
  throw ConfigError("unknown command '" + c.command + "'");
}

}  // namespace pelt::cli
