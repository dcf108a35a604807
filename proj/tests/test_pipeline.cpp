#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lipread/alignment.hpp"
#include "lipread/classify.hpp"
#include "lipread/config.hpp"
#include "lipread/error.hpp"
#include "lipread/hmm.hpp"
#include "lipread/image.hpp"
#include "lipread/lexicon.hpp"
#include "lipread/pipeline.hpp"
#include "lipread/rng.hpp"
#include "support.hpp"

using namespace lipread;
using testsupport::TempDir;
using testsupport::catch_code;
using testsupport::make_lips_scene;

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << body;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Two 48x40 videos of three lips-scene frames each, one-word transcripts.
// Returns the manifest path.
std::filesystem::path build_tiny_dataset(const TempDir& dir) {
  int scene_seed = 1;
  for (const char* id : {"vid_a", "vid_b"}) {
    const auto frames = dir / "frames" / id;
    std::filesystem::create_directories(frames);
    for (int frame = 1; frame <= 3; ++frame) {
      char name[32];
      std::snprintf(name, sizeof name, "%s_%03d.ppm", id, frame);
      save_ppm(frames / name, make_lips_scene(48, 40, scene_seed++).frame);
    }
    write_file(dir / "transcripts" / (std::string(id) + ".txt"), "1 3 bin\n");
  }
  const auto manifest = dir / "manifest.json";
  write_file(manifest, R"({
    "frames_per_video": 3,
    "units_per_frame": 1.0,
    "videos": [
      {"video_id": "vid_a", "frames_dir": "frames/vid_a",
       "transcript": "transcripts/vid_a.txt", "roi": [0, 0, 48, 40]},
      {"video_id": "vid_b", "frames_dir": "frames/vid_b",
       "transcript": "transcripts/vid_b.txt", "roi": [0, 0, 48, 40]}
    ]
  })");
  return manifest;
}

RunConfig tiny_config() {
  RunConfig config;
  config.seed = 5;
  config.feature.grid_w = 8;
  config.feature.grid_h = 4;
  return config;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("symbol tables survive a write/read round trip") {
  TempDir dir;
  const std::vector<SymbolRow> rows = {
      {"vid_a", 1, 7}, {"vid_a", 2, 7}, {"vid_b", 1, 12}};
  const auto path = dir / "labels.csv";
  write_symbol_csv(path, rows, "viseme");
  CHECK(slurp(path) == "video_id,frame,viseme\nvid_a,1,7\nvid_a,2,7\nvid_b,1,12\n");

  const std::vector<SymbolRow> loaded = read_symbol_csv(path);
  REQUIRE(loaded.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(loaded[i].video_id == rows[i].video_id);
    CHECK(loaded[i].frame == rows[i].frame);
    CHECK(loaded[i].symbol == rows[i].symbol);
  }

  CHECK(catch_code([&] { read_symbol_csv(dir / "nope.csv"); }) == Errc::missing_file);
  write_file(dir / "short.csv", "video_id,frame,viseme\nvid_a,1\n");
  CHECK(catch_code([&] { read_symbol_csv(dir / "short.csv"); }) == Errc::malformed_line);
  write_file(dir / "text.csv", "video_id,frame,viseme\nvid_a,one,7\n");
  CHECK(catch_code([&] { read_symbol_csv(dir / "text.csv"); }) == Errc::malformed_line);
}

TEST_CASE("feature CSVs parse with exact values and provenance") {
  TempDir dir;
  const auto path = dir / "features.csv";
  write_file(path, "video_id,frame,f1,f2\nva,1,0.5,1.25\nva,2,-3,0\nvb,1,8,0.125\n");
  const FeatureMatrix m = read_feature_csv(path);
  REQUIRE(m.dim() == 2);
  REQUIRE(m.count() == 3);
  CHECK(m.values(0, 0) == 0.5);
  CHECK(m.values(1, 0) == 1.25);
  CHECK(m.values(0, 1) == -3.0);
  CHECK(m.values(1, 2) == 0.125);
  REQUIRE(m.column_ids.size() == 3);
  CHECK(m.column_ids[0].video_id == "va");
  CHECK(m.column_ids[1].frame == 2);
  CHECK(m.column_ids[2].video_id == "vb");
}

TEST_CASE("feature CSV failure modes carry distinct codes") {
  TempDir dir;
  CHECK(catch_code([&] { read_feature_csv(dir / "gone.csv"); }) == Errc::missing_file);

  write_file(dir / "bad_header.csv", "frame,video_id,f1\nva,1,2\n");
  CHECK(catch_code([&] { read_feature_csv(dir / "bad_header.csv"); }) == Errc::malformed_line);

  write_file(dir / "ragged.csv", "video_id,frame,f1,f2\nva,1,0.5\n");
  CHECK(catch_code([&] { read_feature_csv(dir / "ragged.csv"); }) == Errc::dimension_mismatch);

  write_file(dir / "words.csv", "video_id,frame,f1\nva,1,soon\n");
  CHECK(catch_code([&] { read_feature_csv(dir / "words.csv"); }) == Errc::malformed_line);

  write_file(dir / "empty.csv", "video_id,frame,f1\n");
  CHECK(catch_code([&] { read_feature_csv(dir / "empty.csv"); }) == Errc::empty_data);
}

TEST_CASE("manifests resolve paths against their own directory by default") {
  TempDir dir;
  const auto manifest_path = build_tiny_dataset(dir);
  const DatasetManifest m = load_manifest(manifest_path);
  CHECK(m.root == manifest_path.parent_path());
  CHECK(m.frames_per_video == 3);
  CHECK(m.units_per_frame == 1.0);
  REQUIRE(m.videos.size() == 2);
  CHECK(m.videos[0].roi.w == 48);
  CHECK(m.frame_path(m.videos[0], 2) ==
        manifest_path.parent_path() / "frames/vid_a" / "vid_a_002.ppm");
  CHECK(std::filesystem::exists(m.frame_path(m.videos[1], 3)));
  CHECK(m.transcript_path(m.videos[1]) ==
        manifest_path.parent_path() / "transcripts/vid_b.txt");
}

TEST_CASE("manifest validation refuses duplicates and malformed entries") {
  TempDir dir;
  CHECK(catch_code([&] { load_manifest(dir / "none.json"); }) == Errc::missing_file);

  write_file(dir / "twice.json", R"({"videos": [
    {"video_id": "v", "frames_dir": "f", "transcript": "t", "roi": [0,0,2,2]},
    {"video_id": "v", "frames_dir": "g", "transcript": "u", "roi": [0,0,2,2]}
  ]})");
  CHECK(catch_code([&] { load_manifest(dir / "twice.json"); }) == Errc::bad_config);

  write_file(dir / "no_videos.json", R"({"frames_per_video": 3})");
  CHECK(catch_code([&] { load_manifest(dir / "no_videos.json"); }) == Errc::bad_config);

  write_file(dir / "bad_roi.json", R"({"videos": [
    {"video_id": "v", "frames_dir": "f", "transcript": "t", "roi": [0, 0, 2]}
  ]})");
  CHECK(catch_code([&] { load_manifest(dir / "bad_roi.json"); }) == Errc::bad_config);

  write_file(dir / "zero_frames.json", R"({"frames_per_video": 0, "videos": []})");
  CHECK(catch_code([&] { load_manifest(dir / "zero_frames.json"); }) == Errc::bad_config);

  write_file(dir / "broken.json", "{\"videos\": [");
  CHECK(catch_code([&] { load_manifest(dir / "broken.json"); }) == Errc::bad_config);
}

TEST_CASE("extraction writes one row per frame, deterministically") {
  TempDir dir;
  const DatasetManifest manifest = load_manifest(build_tiny_dataset(dir));
  const RunConfig config = tiny_config();

  const auto first = dir / "features_1.csv";
  const ExtractStats stats = extract_features(manifest, config, first);
  CHECK(stats.frames_total == 6);
  CHECK(stats.frames_written == 6);
  CHECK(stats.failures == 0);

  const FeatureMatrix m = read_feature_csv(first);
  CHECK(m.dim() == 8 * 4);
  REQUIRE(m.count() == 6);
  CHECK(m.column_ids[0].video_id == "vid_a");
  CHECK(m.column_ids[0].frame == 1);
  CHECK(m.column_ids[5].video_id == "vid_b");
  CHECK(m.column_ids[5].frame == 3);
  // Mask occupancy features live in [0, 1] and the lips occupy some of the grid.
  CHECK(m.values.minCoeff() >= 0.0);
  CHECK(m.values.maxCoeff() <= 1.0);
  CHECK(m.values.maxCoeff() > 0.0);

  const auto second = dir / "features_2.csv";
  extract_features(manifest, config, second);
  CHECK(slurp(first) == slurp(second));
}

TEST_CASE("extraction records per-frame failures and keeps going") {
  TempDir dir;
  const DatasetManifest manifest = load_manifest(build_tiny_dataset(dir));
  std::filesystem::remove(manifest.frame_path(manifest.videos[1], 2));

  const auto out = dir / "features.csv";
  const ExtractStats stats = extract_features(manifest, tiny_config(), out);
  CHECK(stats.frames_total == 6);
  CHECK(stats.frames_written == 5);
  CHECK(stats.failures == 1);
  REQUIRE(stats.warnings.size() == 1);
  CHECK(stats.warnings[0].find("MissingFile") != std::string::npos);

  const FeatureMatrix m = read_feature_csv(out);
  REQUIRE(m.count() == 5);
  std::vector<int> vid_b_frames;
  for (const FrameRef& ref : m.column_ids) {
    if (ref.video_id == "vid_b") vid_b_frames.push_back(ref.frame);
  }
  CHECK(vid_b_frames == std::vector<int>{1, 3});
}

TEST_CASE("raw ROI extraction emits resampled gray values") {
  TempDir dir;
  const DatasetManifest manifest = load_manifest(build_tiny_dataset(dir));
  RunConfig config = tiny_config();
  config.feature.mode = "raw_roi";

  const auto out = dir / "raw.csv";
  const ExtractStats stats = extract_features(manifest, config, out);
  CHECK(stats.failures == 0);
  const FeatureMatrix m = read_feature_csv(out);
  CHECK(m.dim() == 8 * 4);
  CHECK(m.count() == 6);
  CHECK(m.values.minCoeff() >= 0.0);
  CHECK(m.values.maxCoeff() <= 1.0);
  // A real photo-like scene is neither all black nor binary.
  CHECK(m.values.minCoeff() < m.values.maxCoeff());
}

TEST_CASE("manifest alignment matches direct transcript labelling") {
  TempDir dir;
  const DatasetManifest manifest = load_manifest(build_tiny_dataset(dir));

  std::vector<std::string> warnings;
  const std::vector<SymbolRow> rows = align_manifest(manifest, "viseme", true, &warnings);
  REQUIRE(rows.size() == 6);  // 2 videos x 3 frames

  const Transcript direct = load_transcript(manifest.transcript_path(manifest.videos[0]),
                                            1.0, 3, "vid_a");
  const FrameLabels labels =
      label_frames(direct, builtin_grid_lexicon(), VisemeMap::lee_york(), nullptr);
  for (int t = 0; t < 3; ++t) {
    CHECK(rows[static_cast<std::size_t>(t)].video_id == "vid_a");
    CHECK(rows[static_cast<std::size_t>(t)].frame == t + 1);
    CHECK(rows[static_cast<std::size_t>(t)].symbol ==
          labels.visemes[static_cast<std::size_t>(t)]);
  }
  // Both videos carry the same transcript, hence the same label track.
  for (int t = 0; t < 3; ++t) {
    CHECK(rows[static_cast<std::size_t>(t)].symbol ==
          rows[static_cast<std::size_t>(t + 3)].symbol);
  }

  const std::vector<SymbolRow> phonemes = align_manifest(manifest, "phoneme", true, nullptr);
  REQUIRE(phonemes.size() == 6);
  // "bin" is b-ih-n: 3 phonemes over 3 frames, one each.
  const PhonemeInventory& inventory = PhonemeInventory::with_silence();
  CHECK(phonemes[0].symbol == inventory.index_of("b").value());
  CHECK(phonemes[1].symbol == inventory.index_of("ih").value());
  CHECK(phonemes[2].symbol == inventory.index_of("n").value());

  CHECK(catch_code([&] { align_manifest(manifest, "frog", true, nullptr); }) ==
        Errc::invalid_argument);
}

TEST_CASE("row grouping requires contiguous frame runs") {
  const std::vector<SymbolRow> good = {
      {"b", 1, 9}, {"a", 2, 6}, {"a", 1, 5}, {"b", 2, 9}, {"a", 3, 7}};
  const std::vector<ClassifiedSequence> seqs = rows_to_sequences(good);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].video_id == "a");  // map order
  CHECK(seqs[0].symbols == std::vector<int>{5, 6, 7});
  CHECK(seqs[1].symbols == std::vector<int>{9, 9});

  CHECK(catch_code([] {
          rows_to_sequences({{"v", 1, 1}, {"v", 3, 1}});
        }) == Errc::missing_frames);
  CHECK(catch_code([] { rows_to_sequences({{"v", 2, 1}}); }) == Errc::missing_frames);
  CHECK(catch_code([] {
          rows_to_sequences({{"v", 1, 1}, {"v", 1, 2}});
        }) == Errc::missing_frames);
}

TEST_CASE("classification assembles per-video symbol sequences") {
  // Two clearly separated 2-D classes: label 1 near x=0, label 2 near x=10.
  FeatureMatrix train;
  train.values.resize(2, 8);
  std::vector<int> labels;
  for (int i = 0; i < 8; ++i) {
    const bool high = i % 2 == 1;
    train.values(0, i) = high ? 10.0 + 0.1 * i : 0.1 * i;
    train.values(1, i) = 1.0;
    labels.push_back(high ? 2 : 1);
  }
  const SvdFit fit = fit_svd(train, 2);
  FrameClassifier classifier;
  classifier.projection = fit.projection;
  classifier.model = Knn::fit(fit.coords, labels, 1);
  classifier.mode = "viseme";
  classifier.alphabet_size = 2;

  FeatureMatrix stream;
  stream.values.resize(2, 6);
  const std::vector<int> expected_a = {1, 2, 1};
  const std::vector<int> expected_b = {2, 2, 1};
  for (int i = 0; i < 3; ++i) {
    stream.values(0, i) = expected_a[static_cast<std::size_t>(i)] == 2 ? 10.0 : 0.0;
    stream.values(1, i) = 1.0;
    stream.column_ids.push_back({"va", i + 1});
    stream.values(0, i + 3) = expected_b[static_cast<std::size_t>(i)] == 2 ? 10.0 : 0.0;
    stream.values(1, i + 3) = 1.0;
  }
  for (int i = 0; i < 3; ++i) stream.column_ids.push_back({"vb", i + 1});

  const std::vector<ClassifiedSequence> seqs = classify_videos(stream, classifier, 3);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].video_id == "va");
  CHECK(seqs[0].symbols == expected_a);
  CHECK(seqs[1].video_id == "vb");
  CHECK(seqs[1].symbols == expected_b);

  // Column order must not matter: reverse the stream.
  FeatureMatrix shuffled;
  shuffled.values.resize(2, 6);
  for (int i = 0; i < 6; ++i) {
    shuffled.values.col(i) = stream.values.col(5 - i);
    shuffled.column_ids.push_back(stream.column_ids[static_cast<std::size_t>(5 - i)]);
  }
  const std::vector<ClassifiedSequence> reordered = classify_videos(shuffled, classifier, 3);
  REQUIRE(reordered.size() == 2);
  CHECK(reordered[0].symbols == expected_a);
  CHECK(reordered[1].symbols == expected_b);

  // Too few frames for a video fails, unless the expectation is disabled.
  FeatureMatrix trimmed = stream;
  trimmed.values.conservativeResize(2, 5);
  trimmed.column_ids.pop_back();
  CHECK(catch_code([&] { classify_videos(trimmed, classifier, 3); }) == Errc::missing_frames);
  CHECK(classify_videos(trimmed, classifier, 0).size() == 2);

  FeatureMatrix narrow;
  narrow.values.resize(3, 1);
  narrow.values << 1, 2, 3;
  narrow.column_ids.push_back({"vc", 1});
  CHECK(catch_code([&] { classify_videos(narrow, classifier, 0); }) ==
        Errc::dimension_mismatch);
}

TEST_CASE("bin sorting slices sequences along transcript intervals") {
  std::vector<ClassifiedSequence> seqs;
  seqs.push_back({"v1", {1, 2, 3, 4, 5, 6, 7, 8}});
  seqs.push_back({"v2", {9, 9, 9, 8, 8, 8, 8, 8}});

  std::map<std::string, Transcript> transcripts;
  Transcript t1;
  t1.video_id = "v1";
  t1.total_frames = 8;
  t1.intervals.push_back({"bin", 1, 3});
  t1.intervals.push_back({"blue", 4, 8});
  transcripts["v1"] = t1;
  Transcript t2;
  t2.video_id = "v2";
  t2.total_frames = 8;
  t2.intervals.push_back({"bin", 2, 5});
  transcripts["v2"] = t2;

  const std::map<std::string, SequenceSet> words = bin_sort(seqs, transcripts);
  REQUIRE(words.size() == 2);
  REQUIRE(words.at("bin").sequences.size() == 2);
  CHECK(words.at("bin").sequences[0] == std::vector<int>{1, 2, 3});
  CHECK(words.at("bin").sequences[1] == std::vector<int>{9, 9, 8, 8});
  REQUIRE(words.at("blue").sequences.size() == 1);
  CHECK(words.at("blue").sequences[0] == std::vector<int>{4, 5, 6, 7, 8});

  // Symbol conservation: every emitted symbol came from the right slice.
  int sliced = 0;
  for (const auto& [word, set] : words) {
    for (const auto& s : set.sequences) sliced += static_cast<int>(s.size());
  }
  CHECK(sliced == 3 + 5 + 4);

  std::map<std::string, Transcript> missing = transcripts;
  missing.erase("v2");
  CHECK(catch_code([&] { bin_sort(seqs, missing); }) == Errc::missing_transcript);

  std::map<std::string, Transcript> overlong = transcripts;
  overlong["v2"].intervals[0].end_frame = 9;
  CHECK(catch_code([&] { bin_sort(seqs, overlong); }) == Errc::interval_out_of_range);

  // A video with an empty transcript contributes nothing, silently.
  std::map<std::string, Transcript> sparse = transcripts;
  sparse["v2"].intervals.clear();
  const auto fewer = bin_sort(seqs, sparse);
  CHECK(fewer.at("bin").sequences.size() == 1);
}

TEST_CASE("word sets survive a save/load round trip") {
  TempDir dir;
  WordSets sets;
  sets.alphabet_size = 7;
  sets.sets["bin"].sequences = {{1, 2, 3}, {4, 5}};
  sets.sets["blue"].sequences = {{7, 7, 7, 7}};
  const auto path = dir / "wordsets.json";
  save_word_sets(path, sets);

  const WordSets loaded = load_word_sets(path);
  CHECK(loaded.alphabet_size == 7);
  REQUIRE(loaded.sets.size() == 2);
  CHECK(loaded.sets.at("bin").sequences == sets.sets.at("bin").sequences);
  CHECK(loaded.sets.at("blue").sequences == sets.sets.at("blue").sequences);

  CHECK(catch_code([&] { load_word_sets(dir / "gone.json"); }) == Errc::missing_file);
  write_file(dir / "junk.json", "{\"kind\": \"word_sets\"}");
  CHECK(catch_code([&] { load_word_sets(dir / "junk.json"); }) == Errc::io_failure);
}

TEST_CASE("evaluation splits words disjointly and scores separable data perfectly") {
  // Disjoint alphabets make decoding trivially right, so accuracy isolates
  // the plumbing: splits, bank training, per-row bookkeeping.
  Rng rng(401);
  std::map<std::string, SequenceSet> words;
  for (int i = 0; i < 8; ++i) {
    std::vector<int> lo, hi;
    const int len = 6 + rng.next_int(5);
    for (int t = 0; t < len; ++t) {
      lo.push_back(1 + rng.next_int(2));  // symbols 1..2
      hi.push_back(3 + rng.next_int(2));  // symbols 3..4
    }
    words["lo"].sequences.push_back(std::move(lo));
    words["hi"].sequences.push_back(std::move(hi));
  }

  TrainConfig cfg;
  cfg.max_iters = 20;
  cfg.restarts = 1;
  cfg.seed = 9;

  std::map<std::string, std::vector<int>> train_ids, test_ids;
  EvalHooks hooks;
  hooks.on_train = [&](const std::string& word, const std::vector<int>& idx) {
    train_ids[word] = idx;
  };
  hooks.on_test = [&](const std::string& word, const std::vector<int>& idx) {
    test_ids[word] = idx;
  };

  const EvalReport report = evaluate_words(words, 4, {{"lo", "hi"}}, 0.75, cfg,
                                           [](const std::string&) { return 2; }, hooks);
  REQUIRE(report.rows.size() == 2);
  for (const EvalRow& row : report.rows) {
    CHECK(row.set == std::vector<std::string>{"hi", "lo"});  // sorted members
    CHECK(row.test_count == 2);  // 8 sequences, fraction 0.75
    CHECK(row.correct == row.test_count);
    CHECK(row.accuracy() == 1.0);
  }

  for (const auto& [word, train] : train_ids) {
    const std::vector<int>& test = test_ids.at(word);
    CHECK(train.size() == 6);
    CHECK(test.size() == 2);
    std::set<int> all(train.begin(), train.end());
    all.insert(test.begin(), test.end());
    CHECK(all.size() == 8);  // disjoint and exhaustive
    CHECK(*all.begin() == 0);
    CHECK(*all.rbegin() == 7);
  }

  // Determinism: identical call, identical report.
  const EvalReport again = evaluate_words(words, 4, {{"lo", "hi"}}, 0.75, cfg,
                                          [](const std::string&) { return 2; });
  REQUIRE(again.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(again.rows[i].target == report.rows[i].target);
    CHECK(again.rows[i].correct == report.rows[i].correct);
  }

  // A word splits the same way in every subset it joins.
  std::map<std::string, std::vector<std::vector<int>>> split_log;
  EvalHooks logger;
  logger.on_train = [&](const std::string& word, const std::vector<int>& idx) {
    split_log[word].push_back(idx);
  };
  evaluate_words(words, 4, {{"lo"}, {"lo", "hi"}}, 0.75, cfg,
                 [](const std::string&) { return 2; }, logger);
  REQUIRE(split_log.at("lo").size() == 2);
  CHECK(split_log.at("lo")[0] == split_log.at("lo")[1]);
}

TEST_CASE("a singleton subset always decodes to its only word") {
  Rng rng(409);
  std::map<std::string, SequenceSet> words;
  for (int i = 0; i < 5; ++i) {
    std::vector<int> seq;
    for (int t = 0; t < 8; ++t) seq.push_back(1 + rng.next_int(3));
    words["only"].sequences.push_back(std::move(seq));
  }
  TrainConfig cfg;
  cfg.max_iters = 5;
  cfg.restarts = 1;
  const EvalReport report = evaluate_words(words, 3, {{"only"}}, 0.75, cfg,
                                           [](const std::string&) { return 2; });
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].accuracy() == 1.0);
}

TEST_CASE("evaluation demands enough sequences per word") {
  std::map<std::string, SequenceSet> words;
  words["thin"].sequences = {{1, 2}, {2, 1}, {1, 1}};  // only 3
  TrainConfig cfg;
  CHECK(catch_code([&] {
          evaluate_words(words, 2, {}, 0.75, cfg, [](const std::string&) { return 2; });
        }) == Errc::too_few_sequences);
  CHECK(catch_code([&] {
          evaluate_words(words, 2, {{"ghost"}}, 0.75, cfg,
                         [](const std::string&) { return 2; });
        }) == Errc::too_few_sequences);
}

TEST_CASE("reports render to the documented text and CSV shapes") {
  EvalReport report;
  report.rows.push_back({"bin", {"bin", "blue"}, 8, 7});
  report.rows.push_back({"blue", {"bin", "blue"}, 3, 1});

  CHECK(render_report(report, "text") ==
        "Word | Set | Accuracy\n"
        "bin | bin, blue | 87.5 %\n"
        "blue | bin, blue | 33.3 %\n");
  CHECK(render_report(report, "csv") ==
        "word,set,test_count,correct,accuracy_percent\n"
        "bin,\"bin, blue\",8,7,87.5\n"
        "blue,\"bin, blue\",3,1,33.3\n");

  const EvalReport empty;
  CHECK(render_report(empty, "text") == "Word | Set | Accuracy\n");
  CHECK(render_report(empty, "csv") == "word,set,test_count,correct,accuracy_percent\n");

  EvalReport unscored;
  unscored.rows.push_back({"bin", {"bin"}, 0, 0});
  CHECK(render_report(unscored, "text") == "Word | Set | Accuracy\nbin | bin | 0.0 %\n");

  CHECK(catch_code([&] { render_report(report, "xml"); }) == Errc::invalid_argument);
}

TEST_CASE("report CSVs round-trip their rows") {
  TempDir dir;
  EvalReport report;
  report.rows.push_back({"bin", {"bin", "blue"}, 8, 7});
  report.rows.push_back({"set", {"lay", "place", "set"}, 10, 4});
  const auto path = dir / "report.csv";
  write_report_csv(path, report);

  const EvalReport loaded = read_report_csv(path);
  REQUIRE(loaded.rows.size() == 2);
  CHECK(loaded.rows[0].target == "bin");
  CHECK(loaded.rows[0].set == std::vector<std::string>{"bin", "blue"});
  CHECK(loaded.rows[0].test_count == 8);
  CHECK(loaded.rows[0].correct == 7);
  CHECK(loaded.rows[1].set == std::vector<std::string>{"lay", "place", "set"});
  CHECK(loaded.rows[1].accuracy() == doctest::Approx(0.4));

  CHECK(catch_code([&] { read_report_csv(dir / "gone.csv"); }) == Errc::missing_file);
  write_file(dir / "bad.csv", "word,set,test_count,correct,accuracy_percent\nbin,b,2\n");
  CHECK(catch_code([&] { read_report_csv(dir / "bad.csv"); }) == Errc::malformed_line);
}

}  // TEST_SUITE(pipeline)
