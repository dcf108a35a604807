#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lipread {

// ARPAbet phoneme inventory: 36 speech phonemes at indices 1..36 plus an
// optional silence symbol "sil" at index 37. Labels are lowercase and carry
// no stress digits.
class PhonemeInventory {
 public:
  static const PhonemeInventory& with_silence();
  static const PhonemeInventory& speech_only();

  int size() const { return static_cast<int>(labels_.size()); }
  int speech_count() const { return speech_count_; }
  bool has_silence() const { return speech_count_ < size(); }
  // 0 when the inventory has no silence symbol.
  int silence_index() const { return has_silence() ? size() : 0; }

  const std::string& label(int index) const;  // 1-based
  std::optional<int> index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return index_of(label).has_value(); }

  // Lowercases and strips trailing stress digits (0/1/2): "AE1" -> "ae".
  static std::string normalize_label(std::string_view raw);

 private:
  PhonemeInventory(std::vector<std::string> labels, int speech_count);

  std::vector<std::string> labels_;  // position i holds index i+1
  std::map<std::string, int, std::less<>> index_;
  int speech_count_;
};

// Many-to-one phoneme -> viseme table. The bundled table is the Lee-York
// map: 11 viseme classes over the 36 speech phonemes, plus a dedicated
// silence viseme (12) when silence is enabled.
class VisemeMap {
 public:
  VisemeMap(const PhonemeInventory* inventory, std::vector<int> phoneme_to_viseme,
            std::vector<std::string> viseme_labels, int speech_viseme_count);

  static const VisemeMap& lee_york();             // with silence
  static const VisemeMap& lee_york_speech_only(); // 36 -> 11

  int viseme_of(int phoneme_index) const;
  int viseme_count() const { return static_cast<int>(viseme_labels_.size()); }
  int speech_viseme_count() const { return speech_viseme_count_; }
  bool has_silence() const { return viseme_count() > speech_viseme_count_; }
  int silence_viseme() const { return has_silence() ? viseme_count() : 0; }
  const std::string& viseme_label(int viseme_index) const;  // 1-based
  const PhonemeInventory& inventory() const { return *inventory_; }

 private:
  const PhonemeInventory* inventory_;
  std::vector<int> phoneme_to_viseme_;  // position i is phoneme index i+1
  std::vector<std::string> viseme_labels_;
  int speech_viseme_count_;
};

struct MapViolation {
  std::string detail;
};

// Checks partition structure, inventory sizes and exact class membership
// against the bundled reference table. Violations are returned as data;
// an empty result means the map is sound.
std::vector<MapViolation> validate_map(const VisemeMap& map);

class PronunciationDict {
 public:
  // Case-insensitive lookup; throws Errc::unknown_word for OOV tokens.
  const std::vector<int>& pronounce(std::string_view word) const;
  bool contains(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  void insert(std::string word, std::vector<int> phonemes);
  const std::map<std::string, std::vector<int>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::vector<int>> entries_;  // keys lowercased
};

// Lexicon file format: one `word PH1 PH2 ...` entry per line, whitespace
// separated, `#` starts a comment. Stress digits are stripped, labels
// lowercased, and any label outside the inventory is rejected.
PronunciationDict parse_lexicon(std::istream& in, const PhonemeInventory& inventory,
                                std::string_view source_name);
PronunciationDict load_lexicon(const std::filesystem::path& path,
                               const PhonemeInventory& inventory);

// The GRID corpus vocabulary (commands, colors, prepositions, letters,
// digits, adverbs), in the lexicon file format.
std::string_view builtin_grid_lexicon_text();
const PronunciationDict& builtin_grid_lexicon();

}  // namespace lipread
