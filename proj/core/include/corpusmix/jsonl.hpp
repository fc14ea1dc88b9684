#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpusmix/document.hpp"
#include "corpusmix/mixer.hpp"
#include "corpusmix/tokenizer.hpp"

namespace corpusmix {

// Reads every line, without the trailing newline. A final empty line after
// the last newline is not reported. Throws unreadable_input.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes one JSON value per line (compact, UTF-8).
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

// {"text", "source", "key"?, "lang"}
nlohmann::json to_json(const Document& doc);
// Token counts are recomputed with the tokenizer.
Document document_from_json(const nlohmann::json& j, const Tokenizer& tokenizer);

std::vector<Document> read_documents(const std::filesystem::path& path, const Tokenizer& tokenizer);
void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs);

// {"text", "provenance":[{"source","key"?,"node"}], "tokens", "tag", "lang"}
nlohmann::json to_json(const TrainingSample& sample);
TrainingSample sample_from_json(const nlohmann::json& j);

std::vector<TrainingSample> read_samples(const std::filesystem::path& path);
void write_samples(const std::filesystem::path& path, const std::vector<TrainingSample>& samples);

}  // namespace corpusmix
