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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pelt/common/binary_io.h"
#include "test_util.h"

namespace pelt {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PELT_BINARY) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSmall = " --entities 10 --budget 200";
const char* kTiny = " --dim 16 --layers 1 --heads 2 --max-len 48 --steps 3 --batch 4";

TEST(CliTest, VersionAndUsageErrors) {
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.output.find("0.1.0"), std::string::npos);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("gen-corpus").code, 2);
  EXPECT_EQ(run("gen-corpus --out x --threads 0").code, 2);
  EXPECT_EQ(run("probe --ckpt /nonexistent/model.ckpt").code, 2);
}

TEST(CliTest, GenCorpusIsDeterministic) {
  const auto dir = testing::scratch_dir("cli_gen");
  ASSERT_EQ(run("gen-corpus --out " + (dir / "a").string() + kSmall).code, 0);
  ASSERT_EQ(run("gen-corpus --out " + (dir / "b").string() + kSmall).code, 0);
  ASSERT_EQ(run("gen-corpus --seed 7 --out " + (dir / "c").string() + kSmall).code, 0);
  for (const char* f : {"vocab.txt", "catalog.tsv", "train.txt", "lookup.txt", "cloze.tsv"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  EXPECT_NE(slurp(dir / "a" / "train.txt"), slurp(dir / "c" / "train.txt"));
}

TEST(CliTest, ConfigFileSuppliesOptions) {
  const auto dir = testing::scratch_dir("cli_config");
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[gen-corpus]\nout=\"" << (dir / "from_config").string()
        << "\"\nentities=10\nbudget=200\n";
  }
  ASSERT_EQ(run("--config " + (dir / "run.toml").string() + " gen-corpus").code, 0);
  ASSERT_EQ(run("gen-corpus --out " + (dir / "direct").string() + kSmall).code, 0);
  EXPECT_EQ(slurp(dir / "from_config" / "train.txt"), slurp(dir / "direct" / "train.txt"));
}

TEST(CliTest, PipelineAndFingerprintRefusal) {
  const auto dir = testing::scratch_dir("cli_pipeline");
  const std::string c = (dir / "corpus").string();
  ASSERT_EQ(run("gen-corpus --out " + c + kSmall).code, 0);
  const auto train_a = run("train --corpus " + c + " --out " + (dir / "a.ckpt").string() + kTiny);
  ASSERT_EQ(train_a.code, 0) << train_a.output;
  ASSERT_EQ(run("train --seed 5 --corpus " + c + " --out " + (dir / "b.ckpt").string() + kTiny)
                .code,
            0);
  const auto table = run("build-table --corpus " + c + " --ckpt " + (dir / "a.ckpt").string() +
                         " --l 3 --out " + (dir / "a.table").string());
  ASSERT_EQ(table.code, 0) << table.output;

  const auto ok = run("probe --corpus " + c + " --ckpt " + (dir / "a.ckpt").string() +
                      " --table " + (dir / "a.table").string());
  EXPECT_EQ(ok.code, 0) << ok.output;
  EXPECT_NE(ok.output.find("probe vanilla"), std::string::npos);
  EXPECT_NE(ok.output.find("probe infused"), std::string::npos);
  EXPECT_EQ(ok.output.rfind("# pelt 0.1.0 probe", 0), 0u) << ok.output;

  const auto refused = run("probe --corpus " + c + " --ckpt " + (dir / "b.ckpt").string() +
                           " --table " + (dir / "a.table").string());
  EXPECT_EQ(refused.code, 1);
  const auto fp_a = to_hex(sha256(read_file(dir / "a.ckpt")));
  EXPECT_NE(refused.output.find(fp_a), std::string::npos) << refused.output;

  std::ofstream(dir / "garbage.table") << "not a table";
  EXPECT_EQ(run("probe --corpus " + c + " --ckpt " + (dir / "a.ckpt").string() + " --table " +
                (dir / "garbage.table").string())
                .code,
            1);
}

TEST(CliTest, LinkPrintsToyLinks) {
  const auto graph = (testing::data_dir() / "linker" / "toy_graph.tsv").string();
  const auto r = run("link --graph " + graph);
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("D4\t44:48:Mars\tP20\t3"), std::string::npos) << r.output;
}

}  // namespace
}  // namespace pelt
