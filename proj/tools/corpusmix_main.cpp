// corpusmix: builds mixed continual-pretraining corpora and scores ICL runs.
//
// Every subcommand reads an optional YAML manifest; --set key=value and the
// named flags override manifest keys. Exit codes: 0 success, 1 validation,
// 2 data error, 3 internal error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpusmix/eval.hpp"
#include "corpusmix/jsonl.hpp"
#include "corpusmix/lm.hpp"
#include "corpusmix/pipeline.hpp"

namespace fs = std::filesystem;
using namespace corpusmix;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct Common {
  std::string manifest;
  std::vector<std::string> overrides;
  std::optional<std::size_t> workers;

  MixManifest load() const {
    std::vector<std::string> all = overrides;
    if (workers) all.push_back("workers=" + std::to_string(*workers));
    return manifest.empty() ? default_manifest(all) : load_manifest(manifest, all);
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-m,--manifest", c.manifest, "YAML manifest")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.overrides, "Override a manifest key, e.g. --set pack.sequence_length=512");
  cmd->add_option("-j,--workers", c.workers, "Worker threads (manifest key 'workers')");
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::vector<TokenId>> read_token_corpus(const fs::path& path, bool raw, const Tokenizer& tok) {
  std::vector<std::vector<TokenId>> corpus;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    if (raw) {
      corpus.push_back(tok.encode(line));
      continue;
    }
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("text")) {
      throw Error(Errc::malformed_record, path.string() + ": expected JSONL rows with a \"text\" field");
    }
    corpus.push_back(tok.encode(j["text"].get<std::string>()));
  }
  return corpus;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpusmix: graph-mixed continual pre-training corpora and ICL scoring"};
  app.require_subcommand(1);

  // ingest
  Common ingest_c;
  std::string ingest_kind = "general_web", ingest_name, ingest_in, ingest_out = "documents.jsonl",
              ingest_errors = "ingest_errors.jsonl";
  auto* ingest = app.add_subcommand("ingest", "Parse raw source JSONL into documents");
  add_common(ingest, ingest_c);
  ingest->add_option("--kind", ingest_kind, "Source kind for --in")
      ->check(CLI::IsMember({"product_info", "review", "article", "general_web", "user_defined"}));
  ingest->add_option("--name", ingest_name, "Source name for user_defined kinds");
  ingest->add_option("--in", ingest_in, "Raw JSONL (default: every manifest source)");
  ingest->add_option("--out", ingest_out, "Document JSONL");
  ingest->add_option("--errors", ingest_errors, "Rejected-line sidecar");

  // filter
  Common filter_c;
  std::string filter_in, filter_out = "filtered.jsonl", filter_drops = "filter_drops.jsonl";
  auto* filter = app.add_subcommand("filter", "Quality-filter documents");
  add_common(filter, filter_c);
  filter->add_option("--in", filter_in)->required();
  filter->add_option("--out", filter_out);
  filter->add_option("--drops", filter_drops);

  // dedup
  Common dedup_c;
  std::string dedup_in, dedup_out = "deduped.jsonl", dedup_drops = "dedup_drops.jsonl";
  bool exact_only = false;
  auto* dedup = app.add_subcommand("dedup", "Exact and MinHash near-duplicate removal");
  add_common(dedup, dedup_c);
  dedup->add_option("--in", dedup_in)->required();
  dedup->add_option("--out", dedup_out);
  dedup->add_option("--drops", dedup_drops);
  dedup->add_flag("--exact-only", exact_only, "Skip near-duplicate detection (manifest key dedup.near)");

  // graph
  Common graph_c;
  std::string graph_in, graph_out = "graph.jsonl";
  auto* graph = app.add_subcommand("graph", "Dump the entity-key graph components");
  add_common(graph, graph_c);
  graph->add_option("--in", graph_in)->required();
  graph->add_option("--out", graph_out);

  // mix
  Common mix_c;
  std::string mix_in, mix_out = "samples.jsonl";
  auto* mix = app.add_subcommand("mix", "Select source-diverse clusters and build training samples");
  add_common(mix, mix_c);
  mix->add_option("--in", mix_in)->required();
  mix->add_option("--out", mix_out);

  // interleave
  Common inter_c;
  std::string inter_in, inter_out = "mixed.jsonl", inter_report = "mix_report.json";
  auto* inter = app.add_subcommand("interleave", "Balance domain and general streams by token ratio");
  add_common(inter, inter_c);
  inter->add_option("--in", inter_in)->required();
  inter->add_option("--out", inter_out);
  inter->add_option("--report", inter_report);

  // pack
  Common pack_c;
  std::string pack_in, pack_out = "shards";
  auto* pack = app.add_subcommand("pack", "Tokenize and pack samples into fixed-length shards");
  add_common(pack, pack_c);
  pack->add_option("--in", pack_in)->required();
  pack->add_option("--out-dir", pack_out);

  // stats
  Common stats_c;
  std::string stats_docs, stats_shards, stats_out;
  auto* stats = app.add_subcommand("stats", "Exact corpus statistics for documents or packed shards");
  add_common(stats, stats_c);
  auto* docs_opt = stats->add_option("--docs", stats_docs, "Document JSONL");
  auto* shards_opt = stats->add_option("--shards", stats_shards, "Shard directory");
  docs_opt->excludes(shards_opt);
  stats->add_option("--out", stats_out, "Write JSON here instead of stdout");

  // eval
  Common eval_c;
  std::string bench_path, pred_path, eval_out, prompts_out;
  std::size_t shots = kDefaultShots, cap = kDefaultEvalCap;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "Render k-shot prompts and/or score predictions");
  add_common(eval, eval_c);
  eval->add_option("--bench", bench_path, "Benchmark JSONL")->required();
  eval->add_option("--pred", pred_path, "Prediction JSONL {id, output}");
  eval->add_option("--out", eval_out, "Report JSON (default stdout)");
  eval->add_option("--prompts-out", prompts_out, "Write {id, prompt} JSONL");
  eval->add_option("-k,--shots", shots, "Demonstrations per prompt");
  eval->add_option("--cap", cap, "Max instances per task")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "Subset sampling seed");

  // lm-train / lm-score
  Common lmt_c;
  std::string lmt_in, lmt_out = "model.tsv";
  std::size_t lm_order = 3;
  double lm_k = 1.0;
  bool lmt_raw = false;
  auto* lmt = app.add_subcommand("lm-train", "Train an add-k n-gram model");
  add_common(lmt, lmt_c);
  lmt->add_option("--in", lmt_in, "JSONL with a text field, or plain lines with --raw")->required();
  lmt->add_option("--out", lmt_out);
  lmt->add_option("-n,--order", lm_order)->check(CLI::PositiveNumber);
  lmt->add_option("-k,--add-k", lm_k);
  lmt->add_flag("--raw", lmt_raw, "Treat input lines as plain text");

  Common lms_c;
  std::string lms_model, lms_in;
  bool lms_raw = false;
  auto* lms = app.add_subcommand("lm-score", "Log-likelihood and perplexity under an n-gram model");
  add_common(lms, lms_c);
  lms->add_option("--model", lms_model)->required()->check(CLI::ExistingFile);
  lms->add_option("--in", lms_in)->required();
  lms->add_flag("--raw", lms_raw, "Treat input lines as plain text");

  // run
  Common run_c;
  auto* run = app.add_subcommand("run", "Run the full pipeline from a manifest");
  add_common(run, run_c);
  run->callback([&] {
    if (run_c.manifest.empty()) throw CLI::RequiredError("--manifest");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (ingest->parsed()) {
      const MixManifest m = ingest_c.load();
      std::vector<SourceInput> sources;
      if (!ingest_in.empty()) {
        const SourceKind kind = *parse_source_kind(ingest_kind);
        SourceInput in;
        in.schema = kind == SourceKind::user_defined ? SourceSchema::user_defined(ingest_name.empty() ? "user_defined"
                                                                                                       : ingest_name)
                                                     : SourceSchema::builtin(kind);
        in.path = ingest_in;
        sources.push_back(std::move(in));
      } else {
        sources = m.sources;
      }
      const auto tok = make_tokenizer(m.tokenizer);
      print_json(run_ingest(sources, ingest_out, ingest_errors, *tok, m.workers));
    } else if (filter->parsed()) {
      const MixManifest m = filter_c.load();
      print_json(run_filter(filter_in, filter_out, filter_drops, m.filter, *make_tokenizer(m.tokenizer), m.workers));
    } else if (dedup->parsed()) {
      const MixManifest m = dedup_c.load();
      print_json(run_dedup(dedup_in, dedup_out, dedup_drops, m.dedup, m.near_dedup && !exact_only,
                           *make_tokenizer(m.tokenizer), m.workers));
    } else if (graph->parsed()) {
      const MixManifest m = graph_c.load();
      print_json(run_graph(graph_in, graph_out, *make_tokenizer(m.tokenizer)));
    } else if (mix->parsed()) {
      const MixManifest m = mix_c.load();
      MixOptions opts{m.clusters, m.seed, m.separator};
      print_json(run_mix(mix_in, mix_out, opts, *make_tokenizer(m.tokenizer), m.workers));
    } else if (inter->parsed()) {
      const MixManifest m = inter_c.load();
      print_json(run_interleave(inter_in, inter_out, inter_report, m.ratio, m.seed));
    } else if (pack->parsed()) {
      const MixManifest m = pack_c.load();
      print_json(run_pack(pack_in, pack_out, m.sequence_length, m.pack_policy, m.sequences_per_shard,
                          *make_tokenizer(m.tokenizer)));
    } else if (stats->parsed()) {
      const MixManifest m = stats_c.load();
      const auto tok = make_tokenizer(m.tokenizer);
      nlohmann::json j;
      if (!stats_shards.empty()) {
        std::vector<Shard> shards;
        for (const fs::path& p : list_shards(stats_shards)) shards.push_back(read_shard_file(p, tok->pad()));
        j = to_json(packed_stats(shards, tok->doc_separator(), tok->pad()));
      } else if (!stats_docs.empty()) {
        j = to_json(corpus_stats(read_documents(stats_docs, *tok)));
      } else {
        throw Error(Errc::invalid_argument, "stats needs --docs or --shards");
      }
      if (stats_out.empty()) {
        print_json(j);
      } else {
        write_json(stats_out, j);
      }
    } else if (eval->parsed()) {
      std::vector<EvalInstance> all;
      for (const std::string& line : read_lines(bench_path)) {
        if (!line.empty()) all.push_back(parse_eval_instance(line));
      }
      // cap applies per task
      std::map<std::string, std::vector<EvalInstance>> by_task;
      std::vector<std::string> task_order;
      for (EvalInstance& inst : all) {
        if (!by_task.count(inst.task)) task_order.push_back(inst.task);
        by_task[inst.task].push_back(std::move(inst));
      }
      std::vector<EvalInstance> chosen;
      for (const std::string& task : task_order) {
        auto subset = sample_eval_subset<EvalInstance>(by_task[task], cap, derive_seed(eval_seed, task, 0));
        std::move(subset.begin(), subset.end(), std::back_inserter(chosen));
      }
      if (!prompts_out.empty()) {
        std::vector<nlohmann::json> rows;
        for (const EvalInstance& inst : chosen) {
          rows.push_back({{"id", inst.id}, {"prompt", build_icl_prompt(inst, shots)}});
        }
        write_jsonl(prompts_out, rows);
      }
      if (!pred_path.empty()) {
        std::map<std::string, std::string> preds;
        for (const std::string& line : read_lines(pred_path)) {
          if (line.empty()) continue;
          const auto j = nlohmann::json::parse(line, nullptr, false);
          if (j.is_discarded() || !j.contains("id") || !j.contains("output")) {
            throw Error(Errc::malformed_record, "prediction rows need {id, output}");
          }
          preds[j["id"].get<std::string>()] = j["output"].get<std::string>();
        }
        std::size_t missing = 0;
        for (const EvalInstance& inst : chosen) missing += preds.count(inst.id) ? 0 : 1;
        if (missing) std::cerr << "warning: " << missing << " instances have no prediction\n";
        const auto reports = evaluate(chosen, preds);
        const auto j = report_json(reports);
        if (eval_out.empty()) {
          print_json(j);
        } else {
          write_json(eval_out, j);
        }
      } else if (prompts_out.empty()) {
        throw Error(Errc::invalid_argument, "eval needs --pred and/or --prompts-out");
      }
    } else if (lmt->parsed()) {
      const MixManifest m = lmt_c.load();
      const auto tok = make_tokenizer(m.tokenizer);
      const auto corpus = read_token_corpus(lmt_in, lmt_raw, *tok);
      const NGramModel model = train_ngram(corpus, lm_order, lm_k, {}, m.workers);
      std::ofstream out(lmt_out);
      if (!out) throw Error(Errc::io_error, "cannot write " + lmt_out);
      model.dump(out);
      print_json({{"order", lm_order}, {"k", lm_k}, {"vocab", model.vocab_size()}, {"contexts", model.table().size()}});
    } else if (lms->parsed()) {
      const MixManifest m = lms_c.load();
      const auto tok = make_tokenizer(m.tokenizer);
      std::ifstream in(lms_model);
      const NGramModel model = NGramModel::load(in);
      const auto corpus = read_token_corpus(lms_in, lms_raw, *tok);
      double total = 0.0;
      std::size_t tokens = 0;
      for (const auto& seq : corpus) {
        if (seq.empty()) continue;
        total += sequence_log_likelihood(model, seq).total;
        tokens += seq.size();
      }
      print_json({{"sequences", corpus.size()},
                  {"tokens", tokens},
                  {"log_likelihood", total},
                  {"perplexity", perplexity(model, corpus)}});
    } else if (run->parsed()) {
      print_json(run_pipeline(run_c.load()));
    }
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
