#include "corpusmix/manifest.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "corpusmix/error.hpp"

namespace corpusmix {

void MixManifest::validate() const {
  filter.validate();
  dedup.validate();
  clusters.validate();
  ratio.validate();
  if (sequence_length < 2 || sequence_length > kMaxSequenceLength) {
    throw Error(Errc::invalid_config, "pack.sequence_length must lie in [2, 65536]");
  }
  if (sequences_per_shard == 0) throw Error(Errc::invalid_config, "pack.sequences_per_shard must be positive");
  if (workers == 0) throw Error(Errc::invalid_config, "workers must be positive");
  if (separator.empty()) throw Error(Errc::invalid_config, "mix.separator must not be empty");
  make_tokenizer(tokenizer);
  for (const SourceInput& s : sources) {
    if (!std::filesystem::exists(s.path)) {
      throw Error(Errc::invalid_config, "source file does not exist: " + s.path.string());
    }
  }
}

namespace {

void apply_override(YAML::Node root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(Errc::invalid_config, "override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);

  // yaml-cpp Node assignment writes through to the referenced node, so the
  // walk rebinds handles with reset()
  YAML::Node cursor;
  cursor.reset(root);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = cursor[parts[i]];
    if (!next.IsDefined() || next.IsNull()) {
      cursor[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next.reset(cursor[parts[i]]);
    }
    if (!next.IsMap()) throw Error(Errc::invalid_config, "override '" + key + "' does not name a scalar key");
    cursor.reset(next);
  }
  cursor[parts.back()] = value;
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (const YAML::Node v = node[key]; v && !v.IsNull()) {
    try {
      out = v.as<T>();
    } catch (const YAML::Exception& e) {
      throw Error(Errc::invalid_config, std::string("manifest key '") + key + "': " + e.what());
    }
  }
}

MixManifest from_yaml(const YAML::Node& root, const std::filesystem::path& base_dir) {
  MixManifest m;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  if (const YAML::Node sources = root["sources"]) {
    if (!sources.IsSequence()) throw Error(Errc::invalid_config, "'sources' must be a list");
    for (const YAML::Node& s : sources) {
      std::string kind_name = "general_web";
      std::string name;
      std::string path;
      read(s, "kind", kind_name);
      read(s, "name", name);
      read(s, "path", path);
      if (path.empty()) throw Error(Errc::invalid_config, "every source needs a 'path'");
      const auto kind = parse_source_kind(kind_name);
      if (!kind) throw Error(Errc::invalid_config, "unknown source kind '" + kind_name + "'");
      SourceInput in;
      if (*kind == SourceKind::user_defined) {
        if (name.empty()) throw Error(Errc::invalid_config, "user_defined sources need a 'name'");
        in.schema = SourceSchema::user_defined(name);
      } else {
        in.schema = SourceSchema::builtin(*kind);
      }
      in.path = resolve(path);
      m.sources.push_back(std::move(in));
    }
  }

  if (const YAML::Node f = root["filter"]) {
    read(f, "min_chars", m.filter.min_chars);
    read(f, "max_chars", m.filter.max_chars);
    read(f, "max_symbol_ratio", m.filter.max_symbol_ratio);
    read(f, "min_distinct_char_ratio", m.filter.min_distinct_char_ratio);
  }
  if (const YAML::Node d = root["dedup"]) {
    read(d, "num_hashes", m.dedup.num_hashes);
    read(d, "bands", m.dedup.bands);
    read(d, "rows", m.dedup.rows);
    read(d, "shingle_size", m.dedup.shingle_size);
    read(d, "jaccard_threshold", m.dedup.jaccard_threshold);
    read(d, "near", m.near_dedup);
  }
  if (const YAML::Node x = root["mix"]) {
    read(x, "min_cluster", m.clusters.min);
    read(x, "max_cluster", m.clusters.max);
    read(x, "separator", m.separator);
  }
  if (const YAML::Node r = root["ratio"]) {
    std::string g2d = m.ratio.general_to_domain.str();
    std::string zh2en = m.ratio.zh_to_en_within_general.str();
    read(r, "general_to_domain", g2d);
    read(r, "zh_to_en", zh2en);
    read(r, "tolerance", m.ratio.tolerance);
    m.ratio.general_to_domain = Ratio::parse(g2d);
    m.ratio.zh_to_en_within_general = Ratio::parse(zh2en);
  }
  if (const YAML::Node p = root["pack"]) {
    std::string policy(to_string(m.pack_policy));
    read(p, "sequence_length", m.sequence_length);
    read(p, "sequences_per_shard", m.sequences_per_shard);
    read(p, "policy", policy);
    m.pack_policy = parse_pack_policy(policy);
  }
  read(root, "tokenizer", m.tokenizer);
  read(root, "seed", m.seed);
  read(root, "workers", m.workers);
  std::string out = m.output_dir.string();
  read(root, "output_dir", out);
  m.output_dir = resolve(out);
  return m;
}

YAML::Node parse_yaml(std::string_view yaml) {
  try {
    YAML::Node root = YAML::Load(std::string(yaml));
    if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) throw Error(Errc::invalid_config, "manifest must be a YAML mapping");
    return root;
  } catch (const YAML::Exception& e) {
    throw Error(Errc::invalid_config, std::string("manifest: ") + e.what());
  }
}

}  // namespace

MixManifest parse_manifest(std::string_view yaml, const std::filesystem::path& base_dir,
                           const std::vector<std::string>& overrides) {
  YAML::Node root = parse_yaml(yaml);
  for (const std::string& o : overrides) apply_override(root, o);
  return from_yaml(root, base_dir);
}

MixManifest load_manifest(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_config, "cannot read manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path(), overrides);
}

MixManifest default_manifest(const std::vector<std::string>& overrides) {
  return parse_manifest("", std::filesystem::current_path(), overrides);
}

}  // namespace corpusmix
