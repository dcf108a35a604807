#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lipread/lexicon.hpp"

namespace lipread {

// Word occupancy in a video. Frames are 1-based and inclusive on both
// ends, matching the transcript file convention; array indexing converts
// to 0-based internally.
struct WordInterval {
  std::string word;
  int start_frame = 1;
  int end_frame = 1;

  int length() const { return end_frame - start_frame + 1; }
};

struct Transcript {
  std::string video_id;
  std::vector<WordInterval> intervals;  // sorted, non-overlapping
  int total_frames = 74;
};

// Parses `start end word` lines; `#` starts a comment. Raw units are
// divided by units_per_frame and rounded half-up to frame numbers.
Transcript parse_transcript(std::istream& in, double units_per_frame, int total_frames,
                            std::string video_id, std::string_view source_name);
Transcript load_transcript(const std::filesystem::path& path, double units_per_frame,
                           int total_frames, std::string video_id);

// Splits n_frames across n_phonemes: each count is floor(n/p) or one more,
// remainders assigned front to back. When the word has more phonemes than
// frames the trailing phonemes get zero frames.
std::vector<int> allocate_frames(int n_frames, int n_phonemes);

// Per-frame symbol tracks for one video.
struct FrameLabels {
  std::vector<int> phonemes;
  std::vector<int> visemes;
};

// Expands each interval's pronunciation over its frames and fills the gaps
// with silence. The viseme track is derived pointwise through the map.
// Dropped phonemes (word shorter in frames than in phonemes) are reported
// through `warnings`.
FrameLabels label_frames(const Transcript& transcript, const PronunciationDict& dict,
                         const VisemeMap& map, std::vector<std::string>* warnings = nullptr);

}  // namespace lipread
