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

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pelt/cli/commands.h"
#include "pelt/common/error.h"

namespace {

using pelt::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_corpus(CLI::App* sub, RunConfig& c) {
  sub->add_option("--corpus", c.corpus_dir, "Corpus directory")->capture_default_str()
      ->check(CLI::ExistingDirectory);
}

void add_model(CLI::App* sub, RunConfig& c) {
  sub->add_option("--ckpt", c.checkpoint, "Checkpoint file")->required()
      ->check(CLI::ExistingFile);
}

void add_lookup(CLI::App* sub, RunConfig& c) {
  sub->add_option("--lookup", c.lookup, "Lookup corpus (default <corpus>/lookup.txt)")
      ->check(CLI::ExistingFile);
  sub->add_option("--cap", c.cap, "Occurrences kept per entity")->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_cloze(CLI::App* sub, RunConfig& c) {
  sub->add_option("--cloze", c.cloze, "Cloze set (default <corpus>/cloze.tsv)")
      ->check(CLI::ExistingFile);
  sub->add_option("--vocab", c.vocab, "Vocabulary (default beside the cloze set)")
      ->check(CLI::ExistingFile);
  sub->add_flag("--restrict", c.restrict_candidates,
                "Rank only among the relation's gold answers");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Entity embedding lookup, infusion and probing pipeline", "pelt"};
  app.set_version_flag("--version", std::string("pelt ") + pelt::cli::kVersion);
  app.set_config("--config", "", "key=value config file; flags override it");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-corpus", "Generate the synthetic corpus");
  add_common(gen, c);
  gen->add_option("--out", c.out, "Output directory")->required();
  gen->add_option("--entities", c.entities)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--zipf", c.zipf)->capture_default_str();
  gen->add_option("--budget", c.budget, "Train mention budget")->capture_default_str();
  gen->add_option("--zero-tail", c.zero_tail, "Entities with train frequency 0")
      ->capture_default_str();

  auto* train = app.add_subcommand("train", "Train the masked language model");
  add_common(train, c);
  add_corpus(train, c);
  train->add_option("--out", c.out, "Checkpoint path (default <corpus>/model.ckpt)");
  train->add_option("--dim", c.dim)->capture_default_str();
  train->add_option("--layers", c.layers)->capture_default_str();
  train->add_option("--heads", c.heads)->capture_default_str();
  train->add_option("--ffn-mult", c.ffn_mult)->capture_default_str();
  train->add_option("--max-len", c.max_len)->capture_default_str();
  train->add_option("--steps", c.steps)->capture_default_str();
  train->add_option("--batch", c.batch)->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--lr", c.lr)->capture_default_str();
  train->add_option("--log-every", c.log_every)->capture_default_str();

  auto* build = app.add_subcommand("build-table", "Build the entity embedding table");
  add_common(build, c);
  add_corpus(build, c);
  add_model(build, c);
  add_lookup(build, c);
  build->add_option("--l", c.norm, "Embedding norm L")->capture_default_str();
  build->add_option("--out", c.out, "Table path (default <corpus>/table.bin)");

  auto* probe = app.add_subcommand("probe", "Cloze probe, vanilla and with a table");
  add_common(probe, c);
  add_corpus(probe, c);
  add_model(probe, c);
  add_cloze(probe, c);
  probe->add_option("--table", c.table, "Entity table; adds the infused report")
      ->check(CLI::ExistingFile);
  probe->add_option("--tsv", c.tsv, "Machine-readable copy of the report");
  probe->add_flag("--strict", c.strict, "Exit 1 if any query is rejected");

  auto* sweep = app.add_subcommand("sweep", "Probe a range of norms L");
  add_common(sweep, c);
  add_corpus(sweep, c);
  add_model(sweep, c);
  add_lookup(sweep, c);
  add_cloze(sweep, c);
  sweep->add_option("--l", c.norms, "a..b, a,b,c or one value")->capture_default_str();
  sweep->add_option("--tsv", c.tsv, "Machine-readable copy of the curve");
  sweep->add_option("--out", c.out, "Freeze the table at the selected L");

  auto* link = app.add_subcommand("link", "Iterative entity linking over a page graph");
  add_common(link, c);
  link->add_option("--graph", c.graph, "Page graph file")->required()->check(CLI::ExistingFile);
  link->add_flag("--trace", c.trace, "Print the per-round trace");
  link->add_option("--tsv", c.tsv, "Machine-readable copy of the links");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of the MLM gradients");
  add_common(grad, c);
  grad->add_option("--vocab-size", c.vocab_size)->capture_default_str()
      ->check(CLI::Range(6, 1 << 20));
  grad->add_option("--samples", c.samples, "Coordinates checked (0 = all)")
      ->capture_default_str();
  grad->add_option("--step", c.h, "Finite-difference step")->capture_default_str();
  grad->add_option("--tolerance", c.tolerance)->capture_default_str();
  grad->add_option("--tsv", c.tsv);

  auto* oracle = app.add_subcommand("oracle", "Compare summed outputs with the gradient step");
  add_common(oracle, c);
  add_corpus(oracle, c);
  add_model(oracle, c);
  add_lookup(oracle, c);
  oracle->add_option("--entity", c.entity, "Entity id (default the first in the catalog)");
  oracle->add_option("--partition-size", c.partition_size,
                     "Vocabulary rows in the partition function (0 = all)")
      ->capture_default_str();
  oracle->add_option("--tsv", c.tsv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  try {
    return pelt::cli::run_command(c, std::cout);
  } catch (const pelt::Error& e) {
    std::cout.flush();
    std::cerr << "pelt " << c.command << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "pelt " << c.command << ": " << e.what() << '\n';
    return 1;
  }
}
