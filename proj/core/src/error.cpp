#include "corpusmix/error.hpp"

namespace corpusmix {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_record: return "malformed_record";
    case Errc::missing_required_field: return "missing_required_field";
    case Errc::empty_record: return "empty_record";
    case Errc::invalid_config: return "invalid_config";
    case Errc::invalid_range: return "invalid_range";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::empty_stream: return "empty_stream";
    case Errc::empty_corpus: return "empty_corpus";
    case Errc::insufficient_demonstrations: return "insufficient_demonstrations";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::unreadable_input: return "unreadable_input";
    case Errc::bad_shard: return "bad_shard";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_config:
    case Errc::invalid_range:
    case Errc::invalid_argument:
    case Errc::insufficient_demonstrations:
    case Errc::length_mismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace corpusmix
