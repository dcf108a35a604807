#include "lipread/error.hpp"

namespace lipread {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::missing_file: return "MissingFile";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::unknown_phoneme: return "UnknownPhoneme";
    case Errc::unknown_word: return "UnknownWord";
    case Errc::overlapping_intervals: return "OverlappingIntervals";
    case Errc::interval_out_of_range: return "IntervalOutOfRange";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::no_edge_found: return "NoEdgeFound";
    case Errc::rank_too_large: return "RankTooLarge";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::numerical_failure: return "NumericalFailure";
    case Errc::empty_class: return "EmptyClass";
    case Errc::symbol_out_of_range: return "SymbolOutOfRange";
    case Errc::empty_data: return "EmptyData";
    case Errc::alphabet_mismatch: return "AlphabetMismatch";
    case Errc::too_few_sequences: return "TooFewSequences";
    case Errc::missing_transcript: return "MissingTranscript";
    case Errc::missing_frames: return "MissingFrames";
    case Errc::io_failure: return "IoFailure";
    case Errc::bad_config: return "BadConfig";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace lipread
