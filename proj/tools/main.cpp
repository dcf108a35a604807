// lipread: end-to-end driver for the visual speech recognition pipeline.
//
// Subcommands cover the full chain: frame feature extraction, ground-truth
// alignment, frame classifier training/application, bin-sorting classified
// sequences into per-word sets, HMM bank training, word-level evaluation,
// synthetic corpus generation, and report rendering.
//
// Exit codes: 0 success, 1 completed with per-frame failures (extract only),
// 2 fatal error. Warnings go to stderr.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lipread/classify.hpp"
#include "lipread/config.hpp"
#include "lipread/csv.hpp"
#include "lipread/error.hpp"
#include "lipread/hmm.hpp"
#include "lipread/lexicon.hpp"
#include "lipread/pipeline.hpp"
#include "lipread/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalArgs {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string config_path;
  std::string mode;
};

lipread::RunConfig resolve_config(const GlobalArgs& args) {
  lipread::RunConfig config;
  if (!args.config_path.empty()) {
    config = lipread::load_run_config(args.config_path);
  }
  if (args.seed_given) config.seed = args.seed;
  if (!args.mode.empty()) config.mode = args.mode;
  return config;
}

int alphabet_for_mode(const lipread::RunConfig& config) {
  if (config.mode == "phoneme") {
    return config.use_silence ? lipread::PhonemeInventory::with_silence().size()
                              : lipread::PhonemeInventory::speech_only().size();
  }
  return config.use_silence ? lipread::VisemeMap::lee_york().viseme_count()
                            : lipread::VisemeMap::lee_york_speech_only().viseme_count();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// Hidden-state count per word: explicit override, then the configured
// default, then the canonical-pronunciation rule (distinct symbols in the
// bundled lexicon entry, minimum 2), then 3 for out-of-lexicon words.
std::function<int(const std::string&)> make_states_rule(const lipread::RunConfig& config) {
  return [config](const std::string& word) {
    const auto it = config.hmm.q_overrides.find(word);
    if (it != config.hmm.q_overrides.end()) return it->second;
    if (config.hmm.default_states > 0) return config.hmm.default_states;
    try {
      const std::vector<int>& phonemes = lipread::builtin_grid_lexicon().pronounce(word);
      std::set<int> distinct;
      for (int p : phonemes) {
        distinct.insert(config.mode == "viseme" ? lipread::VisemeMap::lee_york().viseme_of(p)
                                                : p);
      }
      return std::max(2, static_cast<int>(distinct.size()));
    } catch (const lipread::Error&) {
      return 3;
    }
  };
}

lipread::TrainConfig make_train_config(const lipread::RunConfig& config) {
  lipread::TrainConfig tc;
  tc.max_iters = config.hmm.max_iters;
  tc.ll_tol = config.hmm.ll_tol;
  tc.seed = config.seed;
  tc.restarts = config.hmm.restarts;
  tc.length_mode = lipread::parse_length_mode(config.hmm.length_mode);
  tc.uniform_initial = config.hmm.uniform_initial;
  return tc;
}

int cmd_extract(const lipread::RunConfig& config, const std::string& manifest_path,
                const std::string& out_csv) {
  const lipread::DatasetManifest manifest = lipread::load_manifest(manifest_path);
  const lipread::ExtractStats stats = lipread::extract_features(manifest, config, out_csv);
  print_warnings(stats.warnings);
  std::cout << "extracted " << stats.frames_written << "/" << stats.frames_total
            << " frames -> " << out_csv << "\n";
  return stats.failures > 0 ? 1 : 0;
}

int cmd_align(const lipread::RunConfig& config, const std::string& manifest_path,
              const std::string& out_csv) {
  const lipread::DatasetManifest manifest = lipread::load_manifest(manifest_path);
  std::vector<std::string> warnings;
  const std::vector<lipread::SymbolRow> rows =
      lipread::align_manifest(manifest, config.mode, config.use_silence, &warnings);
  print_warnings(warnings);
  lipread::write_symbol_csv(out_csv, rows, config.mode);
  std::cout << "labeled " << rows.size() << " frames -> " << out_csv << "\n";
  return 0;
}

int cmd_train_classifier(const lipread::RunConfig& config, const std::string& features_path,
                         const std::string& labels_path, const std::string& out_model) {
  const lipread::FeatureMatrix features = lipread::read_feature_csv(features_path);
  const std::vector<lipread::SymbolRow> label_rows = lipread::read_symbol_csv(labels_path);

  std::map<std::pair<std::string, int>, int> label_of;
  for (const auto& row : label_rows) label_of[{row.video_id, row.frame}] = row.symbol;
  std::vector<int> labels;
  labels.reserve(features.column_ids.size());
  for (const auto& ref : features.column_ids) {
    const auto it = label_of.find({ref.video_id, ref.frame});
    if (it == label_of.end()) {
      lipread::raise(lipread::Errc::missing_frames,
                     "no label for " + ref.video_id + " frame " + std::to_string(ref.frame));
    }
    labels.push_back(it->second);
  }

  int rank = config.classifier.svd_rank;
  const int max_rank = static_cast<int>(std::min(features.dim(), features.count()));
  if (rank > max_rank) {
    std::cerr << "warning: svd_rank " << rank << " exceeds min(D, N) = " << max_rank
              << ", clipping\n";
    rank = max_rank;
  }
  const lipread::SvdFit fit = lipread::fit_svd(features, rank, config.classifier.center);

  const lipread::Split split =
      lipread::split_indices(static_cast<int>(features.count()),
                             config.classifier.train_fraction, config.seed);
  Eigen::MatrixXd train_coords(split.train.size(), fit.coords.cols());
  std::vector<int> train_labels;
  train_labels.reserve(split.train.size());
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    train_coords.row(static_cast<Eigen::Index>(i)) = fit.coords.row(split.train[i]);
    train_labels.push_back(labels[static_cast<std::size_t>(split.train[i])]);
  }

  lipread::FrameClassifier classifier;
  classifier.projection = fit.projection;
  classifier.mode = config.mode;
  classifier.alphabet_size = alphabet_for_mode(config);
  if (config.classifier.type == "nb") {
    classifier.model = lipread::GaussianNb::fit(train_coords, train_labels);
  } else {
    classifier.model =
        lipread::Knn::fit(train_coords, train_labels, config.classifier.knn_k);
  }

  const double accuracy = lipread::evaluate_classifier(
      [&](const Eigen::VectorXd& coord) {
        return std::visit([&](const auto& m) { return m.predict(coord); }, classifier.model);
      },
      fit.coords, labels, split);

  lipread::save_classifier(out_model, classifier);
  std::cout << "test accuracy " << lipread::format_fixed(100.0 * accuracy, 4) << " % ("
            << split.test.size() << " frames) -> " << out_model << "\n";
  return 0;
}

int cmd_classify(const std::string& features_path, const std::string& model_path,
                 const std::string& manifest_path, const std::string& out_csv) {
  const lipread::FeatureMatrix features = lipread::read_feature_csv(features_path);
  const lipread::FrameClassifier classifier = lipread::load_classifier(model_path);
  int frames_per_video = 0;
  if (!manifest_path.empty()) {
    frames_per_video = lipread::load_manifest(manifest_path).frames_per_video;
  }
  const std::vector<lipread::ClassifiedSequence> sequences =
      lipread::classify_videos(features, classifier, frames_per_video);
  std::vector<lipread::SymbolRow> rows;
  for (const auto& seq : sequences) {
    for (std::size_t t = 0; t < seq.symbols.size(); ++t) {
      rows.push_back({seq.video_id, static_cast<int>(t) + 1, seq.symbols[t]});
    }
  }
  lipread::write_symbol_csv(out_csv, rows, classifier.mode);
  std::cout << "classified " << sequences.size() << " videos -> " << out_csv << "\n";
  return 0;
}

int cmd_binsort(const std::string& sequences_path, const std::string& transcripts_dir,
                double units_per_frame, int alphabet, const std::string& out_json) {
  const std::vector<lipread::SymbolRow> rows = lipread::read_symbol_csv(sequences_path);
  const std::vector<lipread::ClassifiedSequence> sequences = lipread::rows_to_sequences(rows);

  std::map<std::string, lipread::Transcript> transcripts;
  for (const auto& seq : sequences) {
    const fs::path path = fs::path(transcripts_dir) / (seq.video_id + ".txt");
    if (!fs::exists(path)) {
      lipread::raise(lipread::Errc::missing_transcript,
                     "no transcript for video '" + seq.video_id + "' at " + path.string());
    }
    transcripts[seq.video_id] =
        lipread::load_transcript(path, units_per_frame,
                                 static_cast<int>(seq.symbols.size()), seq.video_id);
  }

  lipread::WordSets sets;
  sets.sets = lipread::bin_sort(sequences, transcripts);
  if (alphabet > 0) {
    sets.alphabet_size = alphabet;
  } else {
    for (const auto& row : rows) sets.alphabet_size = std::max(sets.alphabet_size, row.symbol);
    std::cerr << "note: alphabet size inferred from data: " << sets.alphabet_size << "\n";
  }
  lipread::save_word_sets(out_json, sets);

  std::size_t total = 0;
  for (const auto& [word, set] : sets.sets) total += set.sequences.size();
  std::cout << "binned " << total << " sequences into " << sets.sets.size() << " words -> "
            << out_json << "\n";
  return 0;
}

int cmd_train_hmm(const lipread::RunConfig& config, const std::string& wordsets_path,
                  const std::string& out_bank) {
  const lipread::WordSets sets = lipread::load_word_sets(wordsets_path);
  const lipread::WordModelBank bank = lipread::train_bank(
      sets.sets, sets.alphabet_size, make_states_rule(config), make_train_config(config));
  lipread::save_bank(out_bank, bank);
  std::cout << "trained " << bank.models.size() << " word models -> " << out_bank << "\n";
  return 0;
}

int cmd_evaluate(const lipread::RunConfig& config, const std::string& wordsets_path,
                 const std::string& out_report) {
  const lipread::WordSets sets = lipread::load_word_sets(wordsets_path);
  const lipread::EvalReport report = lipread::evaluate_words(
      sets.sets, sets.alphabet_size, config.eval.subsets, config.eval.train_fraction,
      make_train_config(config), make_states_rule(config));
  lipread::write_report_csv(out_report, report);

  int tested = 0, correct = 0;
  for (const auto& row : report.rows) {
    tested += row.test_count;
    correct += row.correct;
  }
  const double overall = tested ? 100.0 * correct / tested : 0.0;
  std::cout << "evaluated " << report.rows.size() << " rows, overall "
            << lipread::format_fixed(overall, 1) << " % -> " << out_report << "\n";
  return 0;
}

int cmd_synth(const lipread::RunConfig& config, const std::string& out_dir) {
  const lipread::SynthSpec spec = lipread::make_synth_spec(config.synth, config.seed);
  const lipread::SynthCorpus corpus = lipread::synth_generate(spec);

  const fs::path dir(out_dir);
  const fs::path transcript_dir = dir / "transcripts";
  fs::create_directories(transcript_dir);

  std::vector<lipread::SymbolRow> rows;
  for (const auto& video : corpus.videos) {
    for (std::size_t t = 0; t < video.symbols.size(); ++t) {
      rows.push_back({video.video_id, static_cast<int>(t) + 1, video.symbols[t]});
    }
    std::ofstream transcript(transcript_dir / (video.video_id + ".txt"));
    if (!transcript) {
      lipread::raise(lipread::Errc::io_failure,
                     "cannot write transcript for " + video.video_id);
    }
    for (const auto& interval : video.transcript.intervals) {
      transcript << interval.start_frame << " " << interval.end_frame << " " << interval.word
                 << "\n";
    }
  }
  lipread::write_symbol_csv(dir / "sequences.csv", rows, "symbol");
  std::cout << "generated " << corpus.videos.size() << " videos ("
            << spec.words.size() << " words, alphabet " << corpus.alphabet_size << ") -> "
            << out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& report_path, const std::string& format,
               const std::string& out_path) {
  const lipread::EvalReport report = lipread::read_report_csv(report_path);
  const std::string rendered = lipread::render_report(report, format);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path);
    if (!out) lipread::raise(lipread::Errc::io_failure, "cannot write '" + out_path + "'");
    out << rendered;
    std::cout << "report -> " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"visual speech recognition pipeline"};
  app.require_subcommand(1);

  GlobalArgs global;
  auto* seed_opt = app.add_option("--seed", global.seed, "base random seed (default 0)");
  app.add_option("--config", global.config_path, "JSON run-configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--mode", global.mode, "symbol mode")
      ->check(CLI::IsMember({"phoneme", "viseme"}));

  std::string manifest_path, features_path, labels_path, model_path, sequences_path;
  std::string transcripts_dir, wordsets_path, report_path, out_path, out_dir;
  std::string format = "text";
  double units_per_frame = 1.0;
  int alphabet = 0;

  auto* extract = app.add_subcommand("extract", "extract lip features from raster frames");
  extract->add_option("--manifest", manifest_path, "dataset manifest JSON")->required();
  extract->add_option("--out", out_path, "output feature CSV")->required();

  auto* align = app.add_subcommand("align", "frame-level ground-truth labels from transcripts");
  align->add_option("--manifest", manifest_path, "dataset manifest JSON")->required();
  align->add_option("--out", out_path, "output labels CSV")->required();

  auto* train_classifier =
      app.add_subcommand("train-classifier", "fit SVD + frame classifier on labeled features");
  train_classifier->add_option("--features", features_path, "feature CSV")->required();
  train_classifier->add_option("--labels", labels_path, "labels CSV")->required();
  train_classifier->add_option("--out", out_path, "output model JSON")->required();

  auto* classify = app.add_subcommand("classify", "classify frames into symbol sequences");
  classify->add_option("--features", features_path, "feature CSV")->required();
  classify->add_option("--model", model_path, "classifier model JSON")->required();
  classify->add_option("--manifest", manifest_path,
                       "dataset manifest JSON (enforces frames per video)");
  classify->add_option("--out", out_path, "output sequences CSV")->required();

  auto* binsort = app.add_subcommand("binsort", "slice sequences into per-word sets");
  binsort->add_option("--sequences", sequences_path, "sequences CSV")->required();
  binsort->add_option("--transcripts", transcripts_dir, "directory of <video_id>.txt transcripts")
      ->required();
  binsort->add_option("--units-per-frame", units_per_frame,
                      "transcript time units per frame (default 1)");
  binsort->add_option("--alphabet", alphabet, "symbol alphabet size (default: max observed)");
  binsort->add_option("--out", out_path, "output word-sets JSON")->required();

  auto* train_hmm = app.add_subcommand("train-hmm", "train one HMM per word");
  train_hmm->add_option("--wordsets", wordsets_path, "word-sets JSON")->required();
  train_hmm->add_option("--out", out_path, "output model bank JSON")->required();

  auto* evaluate = app.add_subcommand("evaluate", "split, train and score word subsets");
  evaluate->add_option("--wordsets", wordsets_path, "word-sets JSON")->required();
  evaluate->add_option("--out", out_path, "output report CSV")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic word corpus");
  synth->add_option("--out-dir", out_dir, "output directory")->required();

  auto* report = app.add_subcommand("report", "render an evaluation report");
  report->add_option("--report", report_path, "report CSV from evaluate")->required();
  report->add_option("--format", format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  report->add_option("--out", out_path, "output file (default: stdout)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  global.seed_given = seed_opt->count() > 0;

  try {
    const lipread::RunConfig config = resolve_config(global);
    if (app.got_subcommand(extract)) return cmd_extract(config, manifest_path, out_path);
    if (app.got_subcommand(align)) return cmd_align(config, manifest_path, out_path);
    if (app.got_subcommand(train_classifier)) {
      return cmd_train_classifier(config, features_path, labels_path, out_path);
    }
    if (app.got_subcommand(classify)) {
      return cmd_classify(features_path, model_path, manifest_path, out_path);
    }
    if (app.got_subcommand(binsort)) {
      return cmd_binsort(sequences_path, transcripts_dir, units_per_frame, alphabet, out_path);
    }
    if (app.got_subcommand(train_hmm)) return cmd_train_hmm(config, wordsets_path, out_path);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(config, wordsets_path, out_path);
    if (app.got_subcommand(synth)) return cmd_synth(config, out_dir);
    if (app.got_subcommand(report)) return cmd_report(report_path, format, out_path);
  } catch (const lipread::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
