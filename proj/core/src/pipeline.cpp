#include "corpusmix/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>

#include "corpusmix/graph.hpp"
#include "corpusmix/jsonl.hpp"

namespace corpusmix {

namespace fs = std::filesystem;

namespace {

double ratio_of(std::size_t part, std::size_t whole) {
  return whole == 0 ? 1.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

nlohmann::json run_ingest(const std::vector<SourceInput>& sources, const fs::path& out_docs, const fs::path& out_errors,
                          const Tokenizer& tokenizer, std::size_t workers) {
  std::vector<Document> docs;
  std::vector<nlohmann::json> errors;
  nlohmann::json per_source = nlohmann::json::array();
  for (const SourceInput& src : sources) {
    const std::vector<std::string> lines = read_lines(src.path);
    IngestResult r = ingest_lines(lines, src.schema, tokenizer, workers);
    per_source.push_back({{"source", src.schema.source_name()},
                          {"lines", lines.size()},
                          {"documents", r.documents.size()},
                          {"errors", r.errors.size()}});
    for (const IngestError& e : r.errors) {
      errors.push_back({{"line_no", e.line_no},
                        {"reason", errc_name(e.reason)},
                        {"source", src.schema.source_name()},
                        {"file", src.path.filename().string()},
                        {"message", e.message}});
    }
    std::move(r.documents.begin(), r.documents.end(), std::back_inserter(docs));
  }
  write_documents(out_docs, docs);
  write_jsonl(out_errors, errors);
  return {{"sources", per_source}, {"documents", docs.size()}, {"errors", errors.size()}};
}

nlohmann::json run_filter(const fs::path& in, const fs::path& out, const fs::path& drops, const FilterPolicy& policy,
                          const Tokenizer& tokenizer, std::size_t workers) {
  const std::vector<Document> docs = read_documents(in, tokenizer);
  const FilterOutcome r = filter_documents(docs, policy, workers);
  write_documents(out, gather<Document>(docs, r.kept));
  std::vector<nlohmann::json> log;
  for (const FilterDrop& d : r.dropped) log.push_back({{"doc_ref", d.doc_ref}, {"rule", to_string(d.rule)}});
  write_jsonl(drops, log);
  return {{"in", docs.size()}, {"kept", r.kept.size()}, {"survival", ratio_of(r.kept.size(), docs.size())}};
}

nlohmann::json run_dedup(const fs::path& in, const fs::path& out, const fs::path& drops, const DedupParams& params,
                         bool near, const Tokenizer& tokenizer, std::size_t workers) {
  params.validate();
  const std::vector<Document> docs = read_documents(in, tokenizer);
  const DedupOutcome exact = exact_dedup(docs);
  std::vector<nlohmann::json> log;
  for (const DuplicateDrop& d : exact.dropped) {
    log.push_back({{"doc_ref", d.doc_ref}, {"duplicate_of", d.duplicate_of}, {"kind", "exact"}});
  }
  std::vector<std::size_t> kept = exact.kept;
  std::size_t near_dropped = 0;
  if (near) {
    const std::vector<Document> stage = gather<Document>(docs, exact.kept);
    const DedupOutcome nd = near_dedup(stage, params, workers);
    for (const DuplicateDrop& d : nd.dropped) {
      log.push_back({{"doc_ref", exact.kept[d.doc_ref]},
                     {"duplicate_of", exact.kept[d.duplicate_of]},
                     {"kind", "near"},
                     {"jaccard", d.jaccard}});
    }
    near_dropped = nd.dropped.size();
    kept.clear();
    for (std::size_t i : nd.kept) kept.push_back(exact.kept[i]);
  }
  std::stable_sort(log.begin(), log.end(),
                   [](const auto& a, const auto& b) { return a["doc_ref"].template get<std::size_t>() <
                                                            b["doc_ref"].template get<std::size_t>(); });
  write_documents(out, gather<Document>(docs, kept));
  write_jsonl(drops, log);
  return {{"in", docs.size()},
          {"exact_dropped", exact.dropped.size()},
          {"near_dropped", near_dropped},
          {"kept", kept.size()},
          {"survival", ratio_of(kept.size(), docs.size())}};
}

nlohmann::json run_graph(const fs::path& in, const fs::path& out, const Tokenizer& tokenizer) {
  const std::vector<Document> docs = read_documents(in, tokenizer);
  const DataGraph g = build_graph(docs);
  std::vector<nlohmann::json> rows;
  for (const ComponentSummary& c : connected_components(g)) {
    std::vector<std::string> sources;
    for (std::size_t n : c.nodes) sources.push_back(g.nodes[n].source);
    rows.push_back({{"key", c.key}, {"node_refs", c.nodes}, {"sources", sources}, {"total_tokens", c.total_tokens}});
  }
  write_jsonl(out, rows);
  return {{"nodes", g.nodes.size()}, {"components", g.components.size()}, {"keyless", g.keyless.size()}};
}

nlohmann::json run_mix(const fs::path& in, const fs::path& out, const MixOptions& options, const Tokenizer& tokenizer,
                       std::size_t workers) {
  const std::vector<Document> docs = read_documents(in, tokenizer);
  const MixResult r = mix_documents(docs, options, tokenizer, workers);
  write_samples(out, r.samples);
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [size, count] : r.cluster_size_histogram) hist[std::to_string(size)] = count;
  return {{"samples", r.samples.size()},
          {"clusters", r.cluster_count},
          {"leftovers", r.leftover_count},
          {"cluster_size_histogram", hist}};
}

nlohmann::json run_interleave(const fs::path& in, const fs::path& out, const fs::path& report, const RatioSpec& ratio,
                              std::uint64_t seed) {
  StreamMap streams = route_samples(read_samples(in));
  std::map<std::string, std::uint64_t, std::less<>> available;
  for (const auto& [name, samples] : streams) {
    std::uint64_t tokens = 0;
    for (const TrainingSample& s : samples) tokens += s.token_count;
    available[name] = tokens;
  }
  const MixPlan plan = plan_mixture(available, ratio);
  const InterleaveResult r = interleave_streams(streams, plan, seed);
  write_samples(out, r.output);
  nlohmann::json rep = mix_report(plan, r);
  rep["available"] = available;
  write_json(report, rep);
  return rep;
}

std::vector<fs::path> list_shards(const fs::path& shard_dir) {
  std::vector<fs::path> out;
  if (!fs::exists(shard_dir)) return out;
  for (const auto& entry : fs::directory_iterator(shard_dir)) {
    if (entry.path().extension() == ".cpkd") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json run_pack(const fs::path& in, const fs::path& shard_dir, std::size_t sequence_length, PackPolicy policy,
                        std::size_t sequences_per_shard, const Tokenizer& tokenizer) {
  const std::vector<TrainingSample> samples = read_samples(in);
  fs::create_directories(shard_dir);
  for (const fs::path& stale : list_shards(shard_dir)) {
    fs::remove(stale);
    fs::remove(fs::path(stale).replace_extension(".json"));
  }

  SequencePacker packer(sequence_length, policy, tokenizer.doc_separator(), tokenizer.pad());
  std::vector<PackedSequence> pending;
  std::vector<Shard> written;
  auto emit = [&](bool final) {
    while (pending.size() >= sequences_per_shard || (final && !pending.empty())) {
      const std::size_t take = std::min(pending.size(), sequences_per_shard);
      Shard shard;
      shard.length = static_cast<std::uint32_t>(sequence_length);
      shard.sequences.assign(std::make_move_iterator(pending.begin()),
                             std::make_move_iterator(pending.begin() + static_cast<std::ptrdiff_t>(take)));
      pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(take));
      char name[32];
      std::snprintf(name, sizeof(name), "shard-%05zu", written.size());
      write_shard_file(shard_dir / (std::string(name) + ".cpkd"), shard);
      write_json(shard_dir / (std::string(name) + ".json"),
                 shard_sidecar(shard, tokenizer.doc_separator(), tokenizer.pad()));
      written.push_back(std::move(shard));
    }
  };
  for (const TrainingSample& s : samples) {
    packer.add(tokenizer.encode(s.text));
    for (PackedSequence& seq : packer.take_completed()) pending.push_back(std::move(seq));
    emit(false);
  }
  for (PackedSequence& seq : packer.finish()) pending.push_back(std::move(seq));
  emit(true);

  nlohmann::json j = to_json(packed_stats(written, tokenizer.doc_separator(), tokenizer.pad()));
  const PackStats& ps = packer.stats();
  j["documents"] = ps.documents;
  j["skipped_empty"] = ps.skipped_empty;
  j["dropped_tokens"] = ps.dropped_tokens;
  j["sequence_length"] = sequence_length;
  j["policy"] = to_string(policy);
  return j;
}

nlohmann::json run_pipeline(const MixManifest& manifest) {
  manifest.validate();
  const fs::path dir = manifest.output_dir;
  fs::create_directories(dir);
  fs::remove(dir / artifacts::kIncomplete);
  const auto tokenizer = make_tokenizer(manifest.tokenizer);
  const std::size_t workers = manifest.workers;

  nlohmann::json stats;
  auto stage = [&](const char* name, const std::function<nlohmann::json()>& body) {
    try {
      stats["stages"][name] = body();
    } catch (const Error& e) {
      std::ofstream(dir / artifacts::kIncomplete) << name << "\n" << e.what() << "\n";
      throw StageError(name, e);
    } catch (const std::exception& e) {
      std::ofstream(dir / artifacts::kIncomplete) << name << "\n" << e.what() << "\n";
      throw;
    }
  };

  stage("ingest", [&] {
    return run_ingest(manifest.sources, dir / artifacts::kDocuments, dir / artifacts::kIngestErrors, *tokenizer,
                      workers);
  });
  stage("filter", [&] {
    return run_filter(dir / artifacts::kDocuments, dir / artifacts::kFiltered, dir / artifacts::kFilterDrops,
                      manifest.filter, *tokenizer, workers);
  });
  stage("dedup", [&] {
    return run_dedup(dir / artifacts::kFiltered, dir / artifacts::kDeduped, dir / artifacts::kDedupDrops,
                     manifest.dedup, manifest.near_dedup, *tokenizer, workers);
  });
  stage("graph", [&] { return run_graph(dir / artifacts::kDeduped, dir / artifacts::kGraph, *tokenizer); });
  stage("mix", [&] {
    MixOptions opts{manifest.clusters, manifest.seed, manifest.separator};
    return run_mix(dir / artifacts::kDeduped, dir / artifacts::kSamples, opts, *tokenizer, workers);
  });
  stage("interleave", [&] {
    return run_interleave(dir / artifacts::kSamples, dir / artifacts::kMixed, dir / artifacts::kMixReport,
                          manifest.ratio, manifest.seed);
  });
  stage("pack", [&] {
    return run_pack(dir / artifacts::kMixed, dir / artifacts::kShardDir, manifest.sequence_length,
                    manifest.pack_policy, manifest.sequences_per_shard, *tokenizer);
  });
  stage("stats", [&] {
    const auto docs = read_documents(dir / artifacts::kDeduped, *tokenizer);
    return to_json(corpus_stats(docs));
  });

  nlohmann::json out;
  out["corpus"] = stats["stages"]["stats"];
  stats["stages"].erase("stats");
  out["stages"] = stats["stages"];
  out["realized_ratios"] = out["stages"]["interleave"]["realized_ratios"];
  out["tokenizer"] = manifest.tokenizer;
  out["seed"] = manifest.seed;
  write_json(dir / artifacts::kStats, out);
  return out;
}

}  // namespace corpusmix
