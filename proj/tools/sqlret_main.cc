// Copyright 2026 The sqlret Authors
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

// sqlret: retrieval-based text-to-SQL experiments from the command line.
//
// Exit status: 0 on success, 1 for usage errors, and 10 + the error code
// index for library errors (see ErrorCode), each printed as
// "error: <Name>: <message>".

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "sqlret/error.h"

namespace {

void AddCommon(CLI::App* app, sqlret::cli::CommonFlags* flags) {
  app->add_option("--config", flags->config, "key = value settings file")
      ->check(CLI::ExistingFile);
  app->add_option("--set", flags->set, "override one setting, key=value");
  app->add_option("--seed", flags->seed, "seed for initialization and sampling");
  app->add_option("--jobs", flags->jobs, "evaluation threads");
  app->add_option("--out", flags->out, "run directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = sqlret::cli;
  CLI::App app{"Retrieval-based text-to-SQL parser"};
  app.require_subcommand(1);

  cli::IngestFlags ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "read WikiSQL files");
  ingest_cmd->add_option("--questions", ingest.questions)->required();
  ingest_cmd->add_option("--tables", ingest.tables)->required();
  ingest_cmd->add_option("--out", ingest.out, "dataset artifact")->required();

  cli::SubsetFlags subset;
  auto* subset_cmd = app.add_subcommand("subset", "sample a train subset");
  subset_cmd->add_option("--dataset", subset.dataset)->required();
  subset_cmd->add_option("--strategy", subset.strategy)
      ->required()
      ->check(CLI::IsMember({"random", "uniform", "hybrid"}));
  subset_cmd->add_option("--n", subset.n, "random: sample size");
  subset_cmd->add_option("--top", subset.top,
                         "uniform/hybrid: most frequent patterns kept");
  subset_cmd->add_option("--per-pattern", subset.per_pattern,
                         "uniform: examples per pattern");
  subset_cmd->add_option("--floor", subset.floor,
                         "hybrid: minimum examples per pattern");
  subset_cmd->add_option("--ratio", subset.ratio,
                         "hybrid: fraction of each pattern's count");
  subset_cmd->add_option("--seed", subset.seed);
  subset_cmd->add_option("--out", subset.out)->required();

  cli::PretrainFlags pretrain;
  auto* pretrain_cmd =
      app.add_subcommand("pretrain", "paraphrase-pair pretraining");
  pretrain_cmd->add_option("--pairs", pretrain.pairs)->required();
  pretrain_cmd->add_option("--heldout", pretrain.heldout,
                           "pairs scored after training");
  AddCommon(pretrain_cmd, &pretrain.common);

  cli::TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "train retriever and grounder");
  train_cmd->add_option("--train", train.train)->required();
  train_cmd->add_option("--dev", train.dev);
  train_cmd->add_option("--init", train.init, "pretrained checkpoint");
  AddCommon(train_cmd, &train.common);

  cli::EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", eval.checkpoint)->required();
  eval_cmd->add_option("--retrieval-set", eval.retrieval_set)->required();
  eval_cmd->add_option("--test", eval.test)->required();
  eval_cmd->add_option("--k", eval.k, "neighbors voted on");
  eval_cmd->add_option("--jobs", eval.jobs);
  eval_cmd->add_option("--out", eval.out,
                       "report directory (default: the checkpoint's)");
  eval_cmd->add_option("--index-out", eval.index_out, "save the index");

  cli::ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "mean ± stddev over runs");
  report_cmd->add_option("runs", report.runs)->required();
  report_cmd->add_option("--out", report.out);

  cli::GenerateFlags generate;
  auto* generate_cmd =
      app.add_subcommand("generate", "write a synthetic corpus");
  generate_cmd->add_option("--kind", generate.kind)
      ->required()
      ->check(CLI::IsMember({"questions", "pairs", "separable"}));
  generate_cmd->add_option("--count", generate.count)->required();
  generate_cmd->add_option("--seed", generate.seed);
  generate_cmd->add_option("--split", generate.split);
  generate_cmd->add_option("--patterns", generate.patterns,
                           "desk-scale pattern numbers, e.g. 1-8");
  generate_cmd->add_option("--prefix", generate.prefix, "example id prefix");
  generate_cmd->add_option("--out", generate.out,
                           "file, or path stem for questions")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*ingest_cmd) return cli::Ingest(ingest);
    if (*subset_cmd) return cli::Subset(subset);
    if (*pretrain_cmd) return cli::Pretrain(pretrain);
    if (*train_cmd) return cli::Train(train);
    if (*eval_cmd) return cli::Eval(eval);
    if (*report_cmd) return cli::Report(report);
    if (*generate_cmd) return cli::Generate(generate);
  } catch (const sqlret::Error& e) {
    std::cerr << "error: " << sqlret::ErrorCodeName(e.code()) << ": "
              << e.what() << '\n';
    return 10 + static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
