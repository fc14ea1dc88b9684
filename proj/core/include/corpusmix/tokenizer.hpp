#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corpusmix {

using TokenId = std::uint32_t;

// Pluggable tokenizer. Implementations must never emit the special ids from
// encode() on ordinary text.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t vocab_size() const = 0;
  virtual TokenId doc_separator() const = 0;
  virtual TokenId pad() const = 0;

  virtual std::vector<TokenId> encode(std::string_view text) const = 0;
  virtual std::string decode(std::span<const TokenId> ids) const = 0;

  // Token count without materializing ids; override when cheaper.
  virtual std::size_t count(std::string_view text) const { return encode(text).size(); }
};

// One id per UTF-8 byte (0..255), then the separator (256) and pad (257).
class ByteTokenizer final : public Tokenizer {
 public:
  static constexpr TokenId kDocSeparator = 256;
  static constexpr TokenId kPad = 257;

  std::string_view name() const override { return "byte"; }
  std::size_t vocab_size() const override { return 258; }
  TokenId doc_separator() const override { return kDocSeparator; }
  TokenId pad() const override { return kPad; }

  std::vector<TokenId> encode(std::string_view text) const override;
  std::string decode(std::span<const TokenId> ids) const override;
  std::size_t count(std::string_view text) const override { return text.size(); }
};

// Resolves a tokenizer by name; only "byte" is built in.
std::unique_ptr<Tokenizer> make_tokenizer(std::string_view name);

}  // namespace corpusmix
