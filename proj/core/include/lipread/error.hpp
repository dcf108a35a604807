#pragma once

#include <stdexcept>
#include <string>

namespace lipread {

// Failure categories surfaced by the library. Tests and the CLI branch on
// the code; the message carries the human-readable detail (file, line
// number, offending symbol).
enum class Errc {
  missing_file,
  malformed_line,
  unknown_phoneme,
  unknown_word,
  overlapping_intervals,
  interval_out_of_range,
  invalid_argument,
  degenerate_input,
  no_edge_found,
  rank_too_large,
  dimension_mismatch,
  numerical_failure,
  empty_class,
  symbol_out_of_range,
  empty_data,
  alphabet_mismatch,
  too_few_sequences,
  missing_transcript,
  missing_frames,
  io_failure,
  bad_config,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace lipread
