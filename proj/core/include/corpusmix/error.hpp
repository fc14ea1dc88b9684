#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corpusmix {

enum class Errc {
  // record-level ingest failures
  malformed_record,
  missing_required_field,
  empty_record,
  // configuration / precondition failures
  invalid_config,
  invalid_range,
  invalid_argument,
  // data-level failures
  empty_stream,
  empty_corpus,
  insufficient_demonstrations,
  length_mismatch,
  unreadable_input,
  bad_shard,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// Validation errors map to CLI exit code 1, everything else to 2.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace corpusmix
