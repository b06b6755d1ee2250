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

#include "commands.h"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "sqlret/corpus.h"
#include "sqlret/error.h"
#include "sqlret/evaluator.h"
#include "sqlret/model.h"
#include "sqlret/paraphrase.h"
#include "sqlret/report.h"
#include "sqlret/retriever.h"
#include "sqlret/run_config.h"
#include "sqlret/synthetic.h"
#include "sqlret/tokenizer.h"
#include "sqlret/trainer.h"

namespace sqlret::cli {
namespace {

namespace fs = std::filesystem;

RunConfig ResolveConfig(const CommonFlags& flags) {
  RunConfig config =
      flags.config.empty() ? RunConfig() : LoadRunConfig(flags.config);
  for (const std::string& kv : flags.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kConfigError, "--set expects key=value, got '" + kv + "'");
    }
    config.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.jobs) config.jobs = *flags.jobs;
  config.PropagateSeed();
  config.Validate();
  return config;
}

fs::path PrepareRunDir(const std::string& out, const RunConfig& config) {
  if (out.empty()) Fail(ErrorCode::kConfigError, "--out is required");
  const fs::path dir(out);
  fs::create_directories(dir);
  std::ofstream echo(dir / "config.txt", std::ios::trunc);
  if (!echo) Fail(ErrorCode::kIoError, "cannot write " + (dir / "config.txt").string());
  echo << config.ToText();
  return dir;
}

std::vector<std::vector<std::string>> TokenLists(const Dataset& dataset) {
  std::vector<std::vector<std::string>> lists;
  for (const Example& ex : dataset.examples) lists.push_back(ex.tokens);
  for (const auto& [id, schema] : dataset.schemas) {
    for (const std::string& h : schema.headers) lists.push_back(Tokenize(h));
  }
  return lists;
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

std::size_t DistinctPatterns(const Dataset& dataset) {
  std::size_t n = 0;
  for (std::size_t c : ComputePatternHistogram(dataset)) n += c > 0;
  return n;
}

LexicalSplit ParseSplit(const std::string& split) {
  if (split == "train") return LexicalSplit::kTrain;
  if (split == "dev") return LexicalSplit::kDev;
  if (split == "test") return LexicalSplit::kTest;
  Fail(ErrorCode::kConfigError, "unknown split '" + split + "'");
}

// "1-8", "9-12" or "1,3,5" over the twelve desk-scale patterns.
std::vector<LogicalPattern> ParsePatterns(const std::string& spec) {
  const std::vector<LogicalPattern> all = DeskScalePatterns();
  std::vector<LogicalPattern> out;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string part = spec.substr(pos, comma - pos);
    const auto dash = part.find('-');
    int first = 0;
    int last = 0;
    try {
      first = std::stoi(part.substr(0, dash));
      last = dash == std::string::npos ? first : std::stoi(part.substr(dash + 1));
    } catch (const std::exception&) {
      Fail(ErrorCode::kConfigError, "bad pattern list '" + spec + "'");
    }
    if (first < 1 || last > static_cast<int>(all.size()) || first > last) {
      Fail(ErrorCode::kConfigError, "pattern numbers run from 1 to 12");
    }
    for (int i = first; i <= last; ++i) out.push_back(all[i - 1]);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int Ingest(const IngestFlags& flags) {
  const LoadResult loaded = LoadWikiSql(flags.questions, flags.tables);
  WriteDataset(loaded.dataset, flags.out);
  const LoadReport& r = loaded.report;
  const nlohmann::json report{{"lines", r.lines},
                              {"examples", r.loaded},
                              {"dropped_duplicate_columns",
                               r.dropped_duplicate_columns},
                              {"unaligned_examples", r.unaligned_examples},
                              {"unaligned_conditions", r.unaligned_conditions},
                              {"patterns", DistinctPatterns(loaded.dataset)}};
  OpenOut(flags.out + ".report.json") << report.dump(2) << '\n';
  std::cout << r.loaded << " examples\n"
            << r.dropped_duplicate_columns
            << " dropped (repeated where column)\n"
            << r.unaligned_examples << " with unaligned values ("
            << r.unaligned_conditions << " conditions)\n";
  return 0;
}

int Subset(const SubsetFlags& flags) {
  const Dataset dataset = ReadDataset(flags.dataset);
  Dataset subset;
  if (flags.strategy == "random") {
    subset = SampleRandom(dataset, flags.n, flags.seed);
  } else if (flags.strategy == "uniform" || flags.strategy == "hybrid") {
    if (flags.top == 0) Fail(ErrorCode::kConfigError, "--top is required");
    const std::vector<PatternId> patterns =
        TopPatterns(ComputePatternHistogram(dataset), flags.top);
    subset = flags.strategy == "uniform"
                 ? SampleUniform(dataset, patterns, flags.per_pattern, flags.seed)
                 : SampleHybrid(dataset, patterns, flags.ratio, flags.floor,
                                flags.seed);
  } else {
    Fail(ErrorCode::kConfigError, "unknown strategy '" + flags.strategy + "'");
  }
  WriteDataset(subset, flags.out);
  std::cout << subset.size() << " examples, " << DistinctPatterns(subset)
            << " patterns\n";
  return 0;
}

int Pretrain(const PretrainFlags& flags) {
  const RunConfig config = ResolveConfig(flags.common);
  const fs::path dir = PrepareRunDir(flags.common.out, config);
  const std::vector<ParaphrasePair> pairs = ReadParaphrasePairs(flags.pairs);
  std::vector<std::vector<std::string>> lists;
  for (const ParaphrasePair& p : pairs) {
    lists.push_back(Tokenize(p.first));
    lists.push_back(Tokenize(p.second));
  }
  Vocabulary vocab;
  vocab.AddFrequent(lists, config.min_count);
  Model model = Model::Create(config.model, std::move(vocab));
  const PretrainReport report = PretrainParaphrase(pairs, config.pretrain, &model);

  std::ofstream log = OpenOut(dir / "pretrain_log.jsonl");
  for (std::size_t e = 0; e < report.epoch_loss.size(); ++e) {
    log << nlohmann::json{{"epoch", e + 1},
                          {"loss", report.epoch_loss[e]},
                          {"train_accuracy", report.epoch_accuracy[e]}}
               .dump()
        << '\n';
  }
  SaveCheckpoint(dir / "pretrained.ckpt", model,
                 {{"epochs", report.epoch_loss.size()}});
  std::cout << "epochs " << report.epoch_loss.size() << ", train accuracy "
            << report.epoch_accuracy.back() << '\n';
  if (!flags.heldout.empty()) {
    const std::vector<ParaphrasePair> heldout = ReadParaphrasePairs(flags.heldout);
    const double accuracy = PairAccuracy(model, heldout);
    OpenOut(dir / "report.jsonl") << nlohmann::json{{"metric", "pair_accuracy"},
                                                    {"value", accuracy},
                                                    {"n", heldout.size()},
                                                    {"seed", config.seed}}
                                         .dump()
                                  << '\n';
    std::cout << "held-out accuracy " << accuracy << '\n';
  }
  return 0;
}

int Train(const TrainFlags& flags) {
  const RunConfig config = ResolveConfig(flags.common);
  const Dataset train = ReadDataset(flags.train);
  const Dataset dev = flags.dev.empty() ? Dataset() : ReadDataset(flags.dev);
  const auto lists = TokenLists(train);
  Model model;
  if (flags.init.empty()) {
    Vocabulary vocab;
    vocab.AddFrequent(lists, config.min_count);
    model = Model::Create(config.model, std::move(vocab));
  } else {
    model = LoadCheckpoint(flags.init, config.model).model;
    model.ExtendVocabulary(lists, config.min_count, config.seed);
  }
  const fs::path dir = PrepareRunDir(flags.common.out, config);
  TrainHooks hooks;
  hooks.on_eval = [](const EvalLogEntry& e) {
    std::cerr << "epoch " << e.epoch << " loss " << e.train_loss << " dev P "
              << e.dev_p << " dev LF " << e.dev_lf << '\n';
  };
  hooks.on_warning = [](const std::string& message) {
    std::cerr << "warning: " << message << '\n';
  };
  const TrainState state = sqlret::Train(std::move(model), train, dev,
                                         config.train, dir, hooks);
  OpenOut(dir / "train_state.json") << state.ToJson().dump(2) << '\n';
  std::cout << "epochs " << state.epoch << ", best dev LF "
            << state.best_dev_lf << " at epoch " << state.best_epoch << '\n'
            << "checkpoint " << state.best_checkpoint_path.string() << '\n';
  return 0;
}

int Eval(const EvalFlags& flags) {
  const LoadedCheckpoint loaded = LoadCheckpoint(flags.checkpoint);
  const Model& model = loaded.model;
  const fs::path ckpt_dir = fs::path(flags.checkpoint).parent_path();
  const fs::path dir = flags.out.empty() ? ckpt_dir : fs::path(flags.out);
  fs::create_directories(dir);

  RunConfig config;
  if (fs::exists(ckpt_dir / "config.txt")) {
    config = LoadRunConfig(ckpt_dir / "config.txt");
  } else {
    config.model = model.config;
    config.seed = model.config.encoder.seed;
  }
  if (fs::absolute(dir) != fs::absolute(ckpt_dir)) {
    OpenOut(dir / "config.txt") << config.ToText();
  }
  const int k = flags.k.value_or(config.train.k);

  const Dataset retrieval_set = ReadDataset(flags.retrieval_set);
  const Dataset test = ReadDataset(flags.test);
  if (test.empty()) Fail(ErrorCode::kEmptyEval, flags.test + " has no examples");
  const RetrievalIndex index = SwapRetrievalSet(
      model, retrieval_set, fs::path(flags.retrieval_set).filename().string(),
      flags.jobs);
  if (!flags.index_out.empty()) SaveIndex(flags.index_out, index);
  const std::vector<EvalRecord> records =
      Predict(model, index, test, k, flags.jobs);
  const EvalReport report = Summarize(records);

  const std::string table = FormatReport(report);
  OpenOut(dir / "report.txt") << table;
  std::ofstream jsonl = OpenOut(dir / "report.jsonl");
  WriteReportJsonl(jsonl, report, config.seed);
  std::ofstream predictions = OpenOut(dir / "predictions.jsonl");
  WritePredictionsJsonl(predictions, records);
  std::cout << table;
  return 0;
}

int Report(const ReportFlags& flags) {
  std::vector<RunRecord> runs;
  for (const std::string& dir : flags.runs) runs.push_back(ReadRun(dir));
  const std::string table = AggregateRuns(runs);
  if (!flags.out.empty()) OpenOut(flags.out) << table;
  std::cout << table;
  return 0;
}

int Generate(const GenerateFlags& flags) {
  if (flags.out.empty()) Fail(ErrorCode::kConfigError, "--out is required");
  if (flags.kind == "questions") {
    SyntheticOptions options;
    options.patterns = ParsePatterns(flags.patterns);
    options.count = flags.count;
    options.seed = flags.seed;
    options.split = ParseSplit(flags.split);
    options.id_prefix = flags.prefix.empty() ? flags.split : flags.prefix;
    const Dataset dataset = GenerateSynthetic(options);
    WriteWikiSql(dataset, flags.out + ".jsonl", flags.out + ".tables.jsonl");
    std::cout << dataset.size() << " questions\n";
  } else if (flags.kind == "pairs" || flags.kind == "separable") {
    const auto pairs =
        flags.kind == "pairs"
            ? GenerateParaphrasePairs(flags.count, flags.seed,
                                      ParseSplit(flags.split))
            : GenerateSeparablePairs(flags.count, flags.seed);
    WriteParaphrasePairs(pairs, flags.out);
    std::cout << pairs.size() << " pairs\n";
  } else {
    Fail(ErrorCode::kConfigError, "unknown kind '" + flags.kind + "'");
  }
  return 0;
}

}  // namespace sqlret::cli
