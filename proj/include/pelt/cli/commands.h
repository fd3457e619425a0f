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

#ifndef PELT_CLI_COMMANDS_H_
#define PELT_CLI_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

namespace pelt::cli {

inline constexpr const char* kVersion = "0.1.0";

// Every option of every subcommand. Paths left empty take the documented
// default inside the corpus directory.
struct RunConfig {
  std::string command;

  std::filesystem::path corpus_dir = ".";
  std::filesystem::path out;
  std::filesystem::path checkpoint;
  std::filesystem::path table;
  std::filesystem::path cloze;
  std::filesystem::path vocab;
  std::filesystem::path lookup;
  std::filesystem::path graph;
  std::filesystem::path tsv;

  std::uint64_t seed = 42;
  std::size_t threads = 1;

  // gen-corpus
  std::size_t entities = 50;
  double zipf = 1.3;
  std::size_t budget = 1000;
  std::size_t zero_tail = 8;

  // train
  std::size_t dim = 64;
  std::size_t layers = 2;
  std::size_t heads = 4;
  std::size_t ffn_mult = 4;
  std::size_t max_len = 64;
  std::size_t steps = 3000;
  std::size_t batch = 32;
  double lr = 3e-3;
  std::size_t log_every = 100;

  // build-table, probe, sweep, oracle
  double norm = 1.0;
  std::string norms = "1..10";
  std::size_t cap = 256;
  std::size_t k = 1;
  std::string entity;
  std::size_t partition_size = 0;
  bool restrict_candidates = false;
  bool strict = false;
  bool trace = false;

  // gradcheck
  std::size_t vocab_size = 512;
  std::size_t samples = 200;
  double h = 1e-5;
  double tolerance = 1e-4;
};

// Each returns the process exit status and throws pelt::Error on failure.
int cmd_gen_corpus(const RunConfig& config, std::ostream& out);
int cmd_train(const RunConfig& config, std::ostream& out);
int cmd_build_table(const RunConfig& config, std::ostream& out);
int cmd_probe(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_link(const RunConfig& config, std::ostream& out);
int cmd_gradcheck(const RunConfig& config, std::ostream& out);
int cmd_oracle(const RunConfig& config, std::ostream& out);

int run_command(const RunConfig& config, std::ostream& out);

}  // namespace pelt::cli

#endif  // PELT_CLI_COMMANDS_H_
