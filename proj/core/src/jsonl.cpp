#include "corpusmix/jsonl.hpp"

#include <fstream>

#include "corpusmix/error.hpp"

namespace corpusmix {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::unreadable_input, "cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error(Errc::unreadable_input, "error reading " + path.string());
  return lines;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  return out;
}

constexpr auto kDump = [](const nlohmann::json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
};

}  // namespace

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows) {
  std::ofstream out = open_out(path);
  for (const auto& row : rows) out << kDump(row) << '\n';
  if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out = open_out(path);
  out << value.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::unreadable_input, "cannot read " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::unreadable_input, "invalid JSON in " + path.string());
  return j;
}

nlohmann::json to_json(const Document& doc) {
  nlohmann::json j;
  j["text"] = doc.text;
  j["source"] = doc.source;
  if (doc.entity_key) j["key"] = *doc.entity_key;
  j["lang"] = to_string(doc.language);
  return j;
}

Document document_from_json(const nlohmann::json& j, const Tokenizer& tokenizer) {
  try {
    Document d;
    d.text = j.at("text").get<std::string>();
    d.source = j.at("source").get<std::string>();
    if (auto it = j.find("key"); it != j.end() && !it->is_null()) d.entity_key = it->get<std::string>();
    d.language = parse_language(j.value("lang", "other")).value_or(Language::other);
    d.token_count = tokenizer.count(d.text);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_record, std::string("document: ") + e.what());
  }
}

std::vector<Document> read_documents(const std::filesystem::path& path, const Tokenizer& tokenizer) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(Errc::malformed_record, path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    docs.push_back(document_from_json(j, tokenizer));
  }
  return docs;
}

void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::vector<nlohmann::json> rows;
  rows.reserve(docs.size());
  for (const Document& d : docs) rows.push_back(to_json(d));
  write_jsonl(path, rows);
}

nlohmann::json to_json(const TrainingSample& s) {
  nlohmann::json prov = nlohmann::json::array();
  for (const ProvenanceEntry& p : s.provenance) {
    nlohmann::json e;
    e["source"] = p.source;
    if (p.entity_key) e["key"] = *p.entity_key;
    e["node"] = p.node_ref;
    prov.push_back(std::move(e));
  }
  nlohmann::json j;
  j["text"] = s.text;
  j["provenance"] = std::move(prov);
  j["tokens"] = s.token_count;
  j["tag"] = to_string(s.tag);
  j["lang"] = to_string(s.language);
  return j;
}

TrainingSample sample_from_json(const nlohmann::json& j) {
  try {
    TrainingSample s;
    s.text = j.at("text").get<std::string>();
    for (const auto& e : j.at("provenance")) {
      ProvenanceEntry p;
      p.source = e.at("source").get<std::string>();
      if (auto it = e.find("key"); it != e.end() && !it->is_null()) p.entity_key = it->get<std::string>();
      p.node_ref = e.value("node", std::size_t{0});
      s.provenance.push_back(std::move(p));
    }
    s.token_count = j.at("tokens").get<std::size_t>();
    s.tag = j.at("tag").get<std::string>() == "general" ? DomainTag::general : DomainTag::domain;
    s.language = parse_language(j.value("lang", "other")).value_or(Language::other);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_record, std::string("sample: ") + e.what());
  }
}

std::vector<TrainingSample> read_samples(const std::filesystem::path& path) {
  std::vector<TrainingSample> out;
  std::size_t line_no = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(Errc::malformed_record, path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    out.push_back(sample_from_json(j));
  }
  return out;
}

void write_samples(const std::filesystem::path& path, const std::vector<TrainingSample>& samples) {
  std::vector<nlohmann::json> rows;
  rows.reserve(samples.size());
  for (const TrainingSample& s : samples) rows.push_back(to_json(s));
  write_jsonl(path, rows);
}

}  // namespace corpusmix
