#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lipread/alignment.hpp"
#include "lipread/classify.hpp"
#include "lipread/config.hpp"
#include "lipread/hmm.hpp"
#include "lipread/image.hpp"

namespace lipread {

// One video of a dataset: where its frames live, its transcript, and the
// fixed mouth region of interest.
struct VideoEntry {
  std::string video_id;
  std::filesystem::path frames_dir;
  std::filesystem::path transcript;
  Rect roi;
};

struct DatasetManifest {
  std::filesystem::path root;  // paths below resolve against this
  int frames_per_video = 74;
  double units_per_frame = 1.0;  // transcript time units per frame
  std::vector<VideoEntry> videos;

  std::filesystem::path frames_dir(const VideoEntry& v) const { return root / v.frames_dir; }
  std::filesystem::path transcript_path(const VideoEntry& v) const { return root / v.transcript; }
  // Frame files follow `<video_id>_<frame:03>.ppm`.
  std::filesystem::path frame_path(const VideoEntry& v, int frame) const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);

// --- feature extraction ----------------------------------------------------

struct ExtractStats {
  int frames_total = 0;
  int frames_written = 0;
  int failures = 0;
  std::vector<std::string> warnings;  // one entry per skipped frame
};

// Runs the configured extractor over every frame of every video and writes
// one CSV row per frame (columns video_id, frame, f1..fD). Per-frame failures
// are recorded and skipped; the run continues.
ExtractStats extract_features(const DatasetManifest& manifest, const RunConfig& config,
                              const std::filesystem::path& out_csv);

FeatureMatrix read_feature_csv(const std::filesystem::path& path);

// --- symbol tables (alignment labels, classified sequences) -----------------

struct SymbolRow {
  std::string video_id;
  int frame = 0;
  int symbol = 0;
};

void write_symbol_csv(const std::filesystem::path& path, const std::vector<SymbolRow>& rows,
                      const std::string& value_column);
std::vector<SymbolRow> read_symbol_csv(const std::filesystem::path& path);

// Ground-truth per-frame labels for every video of the manifest, in the mode
// requested ("phoneme" or "viseme"). Warnings collect dropped-phoneme notes.
std::vector<SymbolRow> align_manifest(const DatasetManifest& manifest, const std::string& mode,
                                      bool use_silence, std::vector<std::string>* warnings);

// --- frame classification ---------------------------------------------------

struct ClassifiedSequence {
  std::string video_id;
  std::vector<int> symbols;
};

// Applies the classifier to every feature column and assembles per-video
// sequences in frame order. Every video must supply exactly frames_per_video
// rows (pass 0 to accept any per-video length).
std::vector<ClassifiedSequence> classify_videos(const FeatureMatrix& features,
                                                const FrameClassifier& classifier,
                                                int frames_per_video);

// Groups symbol rows into per-video sequences, requiring frames 1..T
// contiguous per video.
std::vector<ClassifiedSequence> rows_to_sequences(const std::vector<SymbolRow>& rows);

// --- bin-sorting and word sets ----------------------------------------------

// Slices each video's symbol sequence along its transcript intervals and
// collects the pieces per word.
std::map<std::string, SequenceSet> bin_sort(const std::vector<ClassifiedSequence>& sequences,
                                            const std::map<std::string, Transcript>& transcripts);

struct WordSets {
  std::map<std::string, SequenceSet> sets;
  int alphabet_size = 0;
};

void save_word_sets(const std::filesystem::path& path, const WordSets& sets);
WordSets load_word_sets(const std::filesystem::path& path);

// --- evaluation ---------------------------------------------------------

struct EvalRow {
  std::string target;
  std::vector<std::string> set;  // candidate words, includes target
  int test_count = 0;
  int correct = 0;

  double accuracy() const { return test_count ? static_cast<double>(correct) / test_count : 0.0; }
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

// Instrumentation points: called once per (subset, word) with the sequence
// indices routed to training and testing.
struct EvalHooks {
  std::function<void(const std::string& word, const std::vector<int>& indices)> on_train;
  std::function<void(const std::string& word, const std::vector<int>& indices)> on_test;
};

// For each candidate subset: split every member word's sequences, train a
// bank on the training portions only, decode each member's test sequences
// against that bank, and emit one row per (member word, subset). Words need
// at least 4 sequences so both split sides are non-empty at the default
// fraction. An empty subset list evaluates one subset of all words.
EvalReport evaluate_words(const std::map<std::string, SequenceSet>& word_sets,
                          int alphabet_size,
                          const std::vector<std::vector<std::string>>& subsets,
                          double train_fraction, const TrainConfig& hmm_config,
                          const std::function<int(const std::string&)>& states_for_word,
                          const EvalHooks& hooks = {});

// Renders the report: `text` gives the aligned `word | set | pct %` table,
// `csv` the machine-readable variant with counts.
std::string render_report(const EvalReport& report, const std::string& format);
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report_csv(const std::filesystem::path& path);

}  // namespace lipread
