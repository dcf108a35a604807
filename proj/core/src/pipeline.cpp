#include "lipread/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lipread/canny.hpp"
#include "lipread/color.hpp"
#include "lipread/csv.hpp"
#include "lipread/error.hpp"
#include "lipread/rng.hpp"
#include "lipread/segment.hpp"

namespace lipread {

std::filesystem::path DatasetManifest::frame_path(const VideoEntry& v, int frame) const {
  char name[64];
  std::snprintf(name, sizeof name, "_%03d.ppm", frame);
  return frames_dir(v) / (v.video_id + name);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "manifest file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::bad_config, "'" + path.string() + "': " + e.what());
  }

  DatasetManifest m;
  try {
    m.root = j.value("root", path.parent_path().string());
    m.frames_per_video = j.value("frames_per_video", 74);
    m.units_per_frame = j.value("units_per_frame", 1.0);
    std::set<std::string> seen;
    for (const auto& vj : j.at("videos")) {
      VideoEntry v;
      v.video_id = vj.at("video_id").get<std::string>();
      v.frames_dir = vj.at("frames_dir").get<std::string>();
      v.transcript = vj.at("transcript").get<std::string>();
      const auto& roi = vj.at("roi");
      if (roi.size() != 4) {
        raise(Errc::bad_config, "'" + path.string() + "': roi of '" + v.video_id +
                                    "' must be [x, y, w, h]");
      }
      v.roi = Rect{roi.at(0).get<int>(), roi.at(1).get<int>(), roi.at(2).get<int>(),
                   roi.at(3).get<int>()};
      if (!seen.insert(v.video_id).second) {
        raise(Errc::bad_config,
              "'" + path.string() + "': duplicate video_id '" + v.video_id + "'");
      }
      m.videos.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::bad_config, "'" + path.string() + "': " + e.what());
  }
  if (m.frames_per_video < 1 || m.units_per_frame <= 0.0) {
    raise(Errc::bad_config, "'" + path.string() + "': frames_per_video and units_per_frame "
                            "must be positive");
  }
  return m;
}

namespace {

std::vector<double> frame_feature(const RasterFrame& roi_frame, const RunConfig& config,
                                  std::uint64_t frame_seed, std::vector<std::string>* warnings,
                                  const std::string& frame_name) {
  if (config.feature.mode == "raw_roi") {
    const GrayFrame gray = to_gray(roi_frame);
    return resample_area(gray, config.feature.grid_w, config.feature.grid_h).pixels;
  }
  const LabFrame lab = to_lab(roi_frame);
  const AbClustering clustering = kmeans_ab(lab, config.feature.kmeans_k, frame_seed);
  if (clustering.degenerate && warnings) {
    warnings->push_back(frame_name + ": chroma too uniform for k=" +
                        std::to_string(config.feature.kmeans_k) + ", clusters duplicated");
  }
  const LipMask mask = select_lip_cluster(clustering);
  bool empty = false;
  std::vector<double> feature =
      mask_to_feature(mask, config.feature.grid_w, config.feature.grid_h, &empty);
  if (empty && warnings) {
    warnings->push_back(frame_name + ": empty lip mask, feature zeroed");
  }
  return feature;
}

}  // namespace

ExtractStats extract_features(const DatasetManifest& manifest, const RunConfig& config,
                              const std::filesystem::path& out_csv) {
  std::ofstream out(out_csv);
  if (!out) raise(Errc::io_failure, "cannot write '" + out_csv.string() + "'");

  const int dim = config.feature.grid_w * config.feature.grid_h;
  out << "video_id,frame";
  for (int i = 1; i <= dim; ++i) out << ",f" << i;
  out << "\n";

  ExtractStats stats;
  for (const auto& video : manifest.videos) {
    for (int frame = 1; frame <= manifest.frames_per_video; ++frame) {
      ++stats.frames_total;
      const std::filesystem::path path = manifest.frame_path(video, frame);
      try {
        const RasterFrame raster = load_image(path);
        const RasterFrame roi = crop(raster, video.roi);
        const std::uint64_t frame_seed =
            mix_seed(mix_seed(config.seed, video.video_id), static_cast<std::uint64_t>(frame));
        const std::vector<double> feature =
            frame_feature(roi, config, frame_seed, &stats.warnings, path.filename().string());
        out << video.video_id << "," << frame;
        for (double v : feature) out << "," << format_double(v);
        out << "\n";
        ++stats.frames_written;
      } catch (const Error& e) {
        ++stats.failures;
        stats.warnings.push_back(e.what());
      }
    }
  }
  return stats;
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "feature file '" + path.string() + "'");
  const std::vector<std::string> lines = read_lines(in);
  if (lines.empty()) raise(Errc::empty_data, "'" + path.string() + "' is empty");

  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() < 3 || header[0] != "video_id" || header[1] != "frame") {
    raise(Errc::malformed_line, "'" + path.string() + "':1: expected header video_id,frame,f1,...");
  }
  const std::size_t dim = header.size() - 2;

  std::vector<FrameRef> ids;
  std::vector<std::vector<double>> columns;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[n]);
    const std::string where = "'" + path.string() + "':" + std::to_string(n + 1);
    if (fields.size() != header.size()) {
      raise(Errc::dimension_mismatch, where + ": " + std::to_string(fields.size() - 2) +
                                          " feature values, header declares " +
                                          std::to_string(dim));
    }
    FrameRef ref;
    ref.video_id = fields[0];
    std::vector<double> col(dim);
    try {
      ref.frame = std::stoi(fields[1]);
      for (std::size_t i = 0; i < dim; ++i) col[i] = std::stod(fields[i + 2]);
    } catch (const std::exception&) {
      raise(Errc::malformed_line, where + ": non-numeric field");
    }
    ids.push_back(std::move(ref));
    columns.push_back(std::move(col));
  }
  if (columns.empty()) raise(Errc::empty_data, "'" + path.string() + "' has no data rows");

  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t i = 0; i < dim; ++i) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = columns[c][i];
    }
  }
  m.column_ids = std::move(ids);
  return m;
}

void write_symbol_csv(const std::filesystem::path& path, const std::vector<SymbolRow>& rows,
                      const std::string& value_column) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << "video_id,frame," << value_column << "\n";
  for (const auto& row : rows) {
    out << row.video_id << "," << row.frame << "," << row.symbol << "\n";
  }
}

std::vector<SymbolRow> read_symbol_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "symbol file '" + path.string() + "'");
  const std::vector<std::string> lines = read_lines(in);
  if (lines.empty()) raise(Errc::empty_data, "'" + path.string() + "' is empty");

  std::vector<SymbolRow> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[n]);
    const std::string where = "'" + path.string() + "':" + std::to_string(n + 1);
    if (fields.size() != 3) {
      raise(Errc::malformed_line, where + ": expected video_id,frame,symbol");
    }
    SymbolRow row;
    row.video_id = fields[0];
    try {
      row.frame = std::stoi(fields[1]);
      row.symbol = std::stoi(fields[2]);
    } catch (const std::exception&) {
      raise(Errc::malformed_line, where + ": non-numeric field");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SymbolRow> align_manifest(const DatasetManifest& manifest, const std::string& mode,
                                      bool use_silence, std::vector<std::string>* warnings) {
  const bool phoneme_mode = mode == "phoneme";
  if (!phoneme_mode && mode != "viseme") {
    raise(Errc::invalid_argument, "align_manifest: mode must be phoneme or viseme");
  }
  const VisemeMap& map = use_silence ? VisemeMap::lee_york() : VisemeMap::lee_york_speech_only();
  const PronunciationDict& dict = builtin_grid_lexicon();

  std::vector<SymbolRow> rows;
  for (const auto& video : manifest.videos) {
    const Transcript transcript =
        load_transcript(manifest.transcript_path(video), manifest.units_per_frame,
                        manifest.frames_per_video, video.video_id);
    const FrameLabels labels = label_frames(transcript, dict, map, warnings);
    const std::vector<int>& track = phoneme_mode ? labels.phonemes : labels.visemes;
    for (std::size_t t = 0; t < track.size(); ++t) {
      rows.push_back({video.video_id, static_cast<int>(t) + 1, track[t]});
    }
  }
  return rows;
}

std::vector<ClassifiedSequence> classify_videos(const FeatureMatrix& features,
                                                const FrameClassifier& classifier,
                                                int frames_per_video) {
  if (features.column_ids.size() != static_cast<std::size_t>(features.count())) {
    raise(Errc::invalid_argument, "classify_videos: feature matrix lacks column ids");
  }
  if (features.dim() != classifier.projection.left.rows()) {
    raise(Errc::dimension_mismatch, "classify_videos: features have dimension " +
                                        std::to_string(features.dim()) +
                                        ", classifier expects " +
                                        std::to_string(classifier.projection.left.rows()));
  }

  std::vector<SymbolRow> rows;
  rows.reserve(static_cast<std::size_t>(features.count()));
  for (Eigen::Index c = 0; c < features.count(); ++c) {
    const FrameRef& ref = features.column_ids[static_cast<std::size_t>(c)];
    rows.push_back({ref.video_id, ref.frame, classifier.predict(features.values.col(c))});
  }
  std::vector<ClassifiedSequence> sequences = rows_to_sequences(rows);
  if (frames_per_video > 0) {
    for (const auto& seq : sequences) {
      if (static_cast<int>(seq.symbols.size()) < frames_per_video) {
        raise(Errc::missing_frames, "classify_videos: video '" + seq.video_id + "' has " +
                                        std::to_string(seq.symbols.size()) + " frames, expected " +
                                        std::to_string(frames_per_video));
      }
    }
  }
  return sequences;
}

std::vector<ClassifiedSequence> rows_to_sequences(const std::vector<SymbolRow>& rows) {
  std::map<std::string, std::vector<std::pair<int, int>>> by_video;  // frame, symbol
  for (const auto& row : rows) {
    by_video[row.video_id].push_back({row.frame, row.symbol});
  }
  std::vector<ClassifiedSequence> sequences;
  for (auto& [video_id, frames] : by_video) {
    std::sort(frames.begin(), frames.end());
    ClassifiedSequence seq;
    seq.video_id = video_id;
    seq.symbols.reserve(frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
      if (frames[t].first != static_cast<int>(t) + 1) {
        raise(Errc::missing_frames, "video '" + video_id + "': expected frame " +
                                        std::to_string(t + 1) + ", found " +
                                        std::to_string(frames[t].first));
      }
      seq.symbols.push_back(frames[t].second);
    }
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

std::map<std::string, SequenceSet> bin_sort(
    const std::vector<ClassifiedSequence>& sequences,
    const std::map<std::string, Transcript>& transcripts) {
  std::map<std::string, SequenceSet> words;
  for (const auto& seq : sequences) {
    const auto it = transcripts.find(seq.video_id);
    if (it == transcripts.end()) {
      raise(Errc::missing_transcript, "bin_sort: no transcript for video '" + seq.video_id + "'");
    }
    for (const auto& interval : it->second.intervals) {
      if (interval.end_frame > static_cast<int>(seq.symbols.size())) {
        raise(Errc::interval_out_of_range,
              "bin_sort: interval for '" + interval.word + "' ends at frame " +
                  std::to_string(interval.end_frame) + ", video '" + seq.video_id + "' has " +
                  std::to_string(seq.symbols.size()));
      }
      words[interval.word].sequences.push_back(std::vector<int>(
          seq.symbols.begin() + interval.start_frame - 1, seq.symbols.begin() + interval.end_frame));
    }
  }
  return words;
}

void save_word_sets(const std::filesystem::path& path, const WordSets& sets) {
  nlohmann::json j;
  j["kind"] = "word_sets";
  j["alphabet_size"] = sets.alphabet_size;
  nlohmann::json words = nlohmann::json::object();
  for (const auto& [word, set] : sets.sets) words[word] = set.sequences;
  j["words"] = std::move(words);
  std::ofstream out(path);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

WordSets load_word_sets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "word-set file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::io_failure, "'" + path.string() + "': " + e.what());
  }
  try {
    WordSets sets;
    sets.alphabet_size = j.at("alphabet_size").get<int>();
    for (const auto& [word, seqs] : j.at("words").items()) {
      sets.sets[word].sequences = seqs.get<std::vector<std::vector<int>>>();
    }
    return sets;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::io_failure, "'" + path.string() + "': " + e.what());
  }
}

EvalReport evaluate_words(const std::map<std::string, SequenceSet>& word_sets,
                          int alphabet_size,
                          const std::vector<std::vector<std::string>>& subsets,
                          double train_fraction, const TrainConfig& hmm_config,
                          const std::function<int(const std::string&)>& states_for_word,
                          const EvalHooks& hooks) {
  std::vector<std::vector<std::string>> plan = subsets;
  if (plan.empty()) {
    plan.emplace_back();
    for (const auto& [word, unused] : word_sets) {
      (void)unused;
      plan.back().push_back(word);
    }
  }

  EvalReport report;
  for (const auto& subset : plan) {
    // Stratified split: each member word's sequences are split independently
    // with a word-derived seed, so a word splits identically in every subset.
    std::map<std::string, SequenceSet> train_sets;
    std::map<std::string, std::vector<int>> test_indices;
    std::vector<std::string> members = subset;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    for (const auto& word : members) {
      const auto it = word_sets.find(word);
      const std::size_t available = it == word_sets.end() ? 0 : it->second.sequences.size();
      if (available < 4) {
        raise(Errc::too_few_sequences, "evaluate: word '" + word + "' has " +
                                           std::to_string(available) +
                                           " sequences, need at least 4");
      }
      const Split split = split_indices(static_cast<int>(available), train_fraction,
                                        mix_seed(hmm_config.seed, "split:" + word));
      for (int idx : split.train) {
        train_sets[word].sequences.push_back(it->second.sequences[static_cast<std::size_t>(idx)]);
      }
      test_indices[word] = split.test;
      if (hooks.on_train) hooks.on_train(word, split.train);
      if (hooks.on_test) hooks.on_test(word, split.test);
    }

    const WordModelBank bank =
        train_bank(train_sets, alphabet_size, states_for_word, hmm_config);

    for (const auto& word : members) {
      EvalRow row;
      row.target = word;
      row.set = members;
      const SequenceSet& full = word_sets.at(word);
      for (int idx : test_indices.at(word)) {
        const DecodeResult decoded =
            decode_word(bank, full.sequences[static_cast<std::size_t>(idx)]);
        ++row.test_count;
        if (decoded.word == word) ++row.correct;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ", ";
    out += words[i];
  }
  return out;
}

}  // namespace

std::string render_report(const EvalReport& report, const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    out << "word,set,test_count,correct,accuracy_percent\n";
    for (const auto& row : report.rows) {
      out << csv_quote(row.target) << "," << csv_quote(join_words(row.set)) << ","
          << row.test_count << "," << row.correct << ","
          << format_fixed(100.0 * row.accuracy(), 1) << "\n";
    }
    return out.str();
  }
  if (format != "text") {
    raise(Errc::invalid_argument, "render_report: format must be text or csv");
  }
  out << "Word | Set | Accuracy\n";
  for (const auto& row : report.rows) {
    out << row.target << " | " << join_words(row.set) << " | "
        << format_fixed(100.0 * row.accuracy(), 1) << " %\n";
  }
  return out.str();
}

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << render_report(report, "csv");
}

EvalReport read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "report file '" + path.string() + "'");
  const std::vector<std::string> lines = read_lines(in);
  if (lines.empty()) raise(Errc::empty_data, "'" + path.string() + "' is empty");

  EvalReport report;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[n]);
    const std::string where = "'" + path.string() + "':" + std::to_string(n + 1);
    if (fields.size() != 5) {
      raise(Errc::malformed_line, where + ": expected 5 columns");
    }
    EvalRow row;
    row.target = fields[0];
    std::istringstream set_stream(fields[1]);
    std::string member;
    while (std::getline(set_stream, member, ',')) {
      const std::string trimmed = trim(member);
      if (!trimmed.empty()) row.set.push_back(trimmed);
    }
    try {
      row.test_count = std::stoi(fields[2]);
      row.correct = std::stoi(fields[3]);
    } catch (const std::exception&) {
      raise(Errc::malformed_line, where + ": non-numeric count");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace lipread
