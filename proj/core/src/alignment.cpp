#include "lipread/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lipread/error.hpp"

namespace lipread {

namespace {

int to_frame(double raw_units, double units_per_frame) {
  return static_cast<int>(std::floor(raw_units / units_per_frame + 0.5));
}

}  // namespace

Transcript parse_transcript(std::istream& in, double units_per_frame, int total_frames,
                            std::string video_id, std::string_view source_name) {
  if (units_per_frame <= 0.0) {
    raise(Errc::invalid_argument, "units_per_frame must be positive");
  }
  Transcript t;
  t.video_id = std::move(video_id);
  t.total_frames = total_frames;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    double raw_start, raw_end;
    std::string word;
    if (!(ss >> raw_start)) continue;  // blank line
    std::string location = std::string(source_name) + ":" + std::to_string(line_no);
    std::string extra;
    if (!(ss >> raw_end >> word)) {
      raise(Errc::malformed_line, location + ": expected `start end word`");
    }
    if (ss >> extra) {
      raise(Errc::malformed_line, location + ": trailing token '" + extra + "'");
    }
    WordInterval iv;
    iv.word = word;
    iv.start_frame = to_frame(raw_start, units_per_frame);
    iv.end_frame = to_frame(raw_end, units_per_frame);
    if (iv.start_frame > iv.end_frame) {
      raise(Errc::malformed_line,
            location + ": interval start " + std::to_string(iv.start_frame) +
                " after end " + std::to_string(iv.end_frame));
    }
    if (iv.start_frame < 1 || iv.end_frame > total_frames) {
      raise(Errc::interval_out_of_range,
            location + ": [" + std::to_string(iv.start_frame) + "," +
                std::to_string(iv.end_frame) + "] outside [1," +
                std::to_string(total_frames) + "]");
    }
    t.intervals.push_back(std::move(iv));
  }

  std::stable_sort(t.intervals.begin(), t.intervals.end(),
                   [](const WordInterval& a, const WordInterval& b) {
                     return a.start_frame < b.start_frame;
                   });
  for (std::size_t i = 1; i < t.intervals.size(); ++i) {
    if (t.intervals[i].start_frame <= t.intervals[i - 1].end_frame) {
      raise(Errc::overlapping_intervals,
            std::string(source_name) + ": '" + t.intervals[i - 1].word + "' and '" +
                t.intervals[i].word + "' overlap");
    }
  }
  return t;
}

Transcript load_transcript(const std::filesystem::path& path, double units_per_frame,
                           int total_frames, std::string video_id) {
  std::ifstream in(path);
  if (!in) {
    raise(Errc::missing_file, "transcript file '" + path.string() + "'");
  }
  return parse_transcript(in, units_per_frame, total_frames, std::move(video_id),
                          path.string());
}

std::vector<int> allocate_frames(int n_frames, int n_phonemes) {
  if (n_frames < 1 || n_phonemes < 1) {
    raise(Errc::invalid_argument, "allocate_frames needs positive frame and phoneme counts");
  }
  const int base = n_frames / n_phonemes;
  const int extra = n_frames % n_phonemes;
  std::vector<int> counts(static_cast<std::size_t>(n_phonemes), base);
  for (int i = 0; i < extra; ++i) counts[static_cast<std::size_t>(i)] += 1;
  return counts;
}

FrameLabels label_frames(const Transcript& transcript, const PronunciationDict& dict,
                         const VisemeMap& map, std::vector<std::string>* warnings) {
  const auto& inventory = map.inventory();
  const int sil = inventory.silence_index();
  if (sil == 0) {
    raise(Errc::invalid_argument,
          "labeling requires a silence symbol to fill gap frames; "
          "transcript '" + transcript.video_id + "' cannot be labeled without it");
  }

  FrameLabels out;
  out.phonemes.assign(static_cast<std::size_t>(transcript.total_frames), sil);

  for (const auto& iv : transcript.intervals) {
    std::vector<int> phonemes;
    if (iv.word == "sil") {
      phonemes = {sil};
    } else if (dict.contains(iv.word)) {
      phonemes = dict.pronounce(iv.word);
    } else {
      raise(Errc::unknown_word,
            "'" + iv.word + "' in transcript for video '" + transcript.video_id + "'");
    }

    const int n_frames = iv.length();
    const auto counts = allocate_frames(n_frames, static_cast<int>(phonemes.size()));
    int frame = iv.start_frame - 1;  // 0-based cursor
    int dropped = 0;
    for (std::size_t p = 0; p < phonemes.size(); ++p) {
      if (counts[p] == 0) {
        ++dropped;
        continue;
      }
      for (int c = 0; c < counts[p]; ++c) {
        out.phonemes[static_cast<std::size_t>(frame++)] = phonemes[p];
      }
    }
    if (dropped > 0 && warnings != nullptr) {
      warnings->push_back("video '" + transcript.video_id + "': word '" + iv.word + "' spans " +
                          std::to_string(n_frames) + " frames but has " +
                          std::to_string(phonemes.size()) + " phonemes; dropped " +
                          std::to_string(dropped));
    }
  }

  out.visemes.resize(out.phonemes.size());
  for (std::size_t i = 0; i < out.phonemes.size(); ++i) {
    out.visemes[i] = map.viseme_of(out.phonemes[i]);
  }
  return out;
}

}  // namespace lipread
