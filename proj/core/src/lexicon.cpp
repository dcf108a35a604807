#include "lipread/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "lipread/error.hpp"

namespace lipread {

namespace {

// Lee-York viseme classes in table order. Row 3 carries "ng": the published
// map groups it with the other velars, which is also what makes the speech
// inventory come out at 36.
struct VisemeRow {
  const char* label;
  std::vector<const char*> phonemes;
};

const std::vector<VisemeRow>& reference_rows() {
  static const std::vector<VisemeRow> rows = {
      {"P", {"b", "p", "m"}},
      {"T", {"d", "t", "s", "z", "th", "dh"}},
      {"K", {"g", "k", "n", "ng", "l", "y", "hh"}},
      {"CH", {"jh", "ch"}},
      {"F", {"f", "v"}},
      {"W", {"r", "w"}},
      {"IY", {"iy", "ih"}},
      {"EH", {"eh", "ey", "ae"}},
      {"AA", {"aa", "aw", "ay", "ah"}},
      {"A0", {"ao", "oy", "ow"}},
      {"UH", {"uh", "uw"}},
  };
  return rows;
}

std::vector<std::string> speech_labels_in_order() {
  std::vector<std::string> labels;
  for (const auto& row : reference_rows()) {
    for (const char* p : row.phonemes) labels.emplace_back(p);
  }
  return labels;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

PhonemeInventory::PhonemeInventory(std::vector<std::string> labels, int speech_count)
    : labels_(std::move(labels)), speech_count_(speech_count) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    index_[labels_[i]] = static_cast<int>(i) + 1;
  }
}

const PhonemeInventory& PhonemeInventory::with_silence() {
  static const PhonemeInventory inv = [] {
    auto labels = speech_labels_in_order();
    const int speech = static_cast<int>(labels.size());
    labels.emplace_back("sil");
    return PhonemeInventory(std::move(labels), speech);
  }();
  return inv;
}

const PhonemeInventory& PhonemeInventory::speech_only() {
  static const PhonemeInventory inv = [] {
    auto labels = speech_labels_in_order();
    const int speech = static_cast<int>(labels.size());
    return PhonemeInventory(std::move(labels), speech);
  }();
  return inv;
}

const std::string& PhonemeInventory::label(int index) const {
  if (index < 1 || index > size()) {
    raise(Errc::invalid_argument,
          "phoneme index " + std::to_string(index) + " outside 1.." + std::to_string(size()));
  }
  return labels_[static_cast<std::size_t>(index - 1)];
}

std::optional<int> PhonemeInventory::index_of(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string PhonemeInventory::normalize_label(std::string_view raw) {
  std::string s = lower(raw);
  while (!s.empty() && (s.back() == '0' || s.back() == '1' || s.back() == '2')) {
    s.pop_back();
  }
  return s;
}

VisemeMap::VisemeMap(const PhonemeInventory* inventory, std::vector<int> phoneme_to_viseme,
                     std::vector<std::string> viseme_labels, int speech_viseme_count)
    : inventory_(inventory),
      phoneme_to_viseme_(std::move(phoneme_to_viseme)),
      viseme_labels_(std::move(viseme_labels)),
      speech_viseme_count_(speech_viseme_count) {
  if (static_cast<int>(phoneme_to_viseme_.size()) != inventory_->size()) {
    raise(Errc::invalid_argument, "viseme map does not cover the phoneme inventory");
  }
}

namespace {

VisemeMap build_lee_york(const PhonemeInventory& inv, bool with_silence) {
  std::vector<int> mapping(static_cast<std::size_t>(inv.size()), 0);
  std::vector<std::string> labels;
  int viseme = 0;
  for (const auto& row : reference_rows()) {
    ++viseme;
    labels.emplace_back(row.label);
    for (const char* p : row.phonemes) {
      auto idx = inv.index_of(p);
      mapping[static_cast<std::size_t>(*idx - 1)] = viseme;
    }
  }
  const int speech_visemes = viseme;
  if (with_silence) {
    labels.emplace_back("SIL");
    mapping[static_cast<std::size_t>(inv.silence_index() - 1)] = ++viseme;
  }
  return VisemeMap(&inv, std::move(mapping), std::move(labels), speech_visemes);
}

}  // namespace

const VisemeMap& VisemeMap::lee_york() {
  static const VisemeMap map = build_lee_york(PhonemeInventory::with_silence(), true);
  return map;
}

const VisemeMap& VisemeMap::lee_york_speech_only() {
  static const VisemeMap map = build_lee_york(PhonemeInventory::speech_only(), false);
  return map;
}

int VisemeMap::viseme_of(int phoneme_index) const {
  if (phoneme_index < 1 || phoneme_index > inventory_->size()) {
    raise(Errc::invalid_argument,
          "phoneme index " + std::to_string(phoneme_index) + " outside inventory");
  }
  return phoneme_to_viseme_[static_cast<std::size_t>(phoneme_index - 1)];
}

const std::string& VisemeMap::viseme_label(int viseme_index) const {
  if (viseme_index < 1 || viseme_index > viseme_count()) {
    raise(Errc::invalid_argument,
          "viseme index " + std::to_string(viseme_index) + " outside 1.." +
              std::to_string(viseme_count()));
  }
  return viseme_labels_[static_cast<std::size_t>(viseme_index - 1)];
}

std::vector<MapViolation> validate_map(const VisemeMap& map) {
  std::vector<MapViolation> violations;
  const auto& inv = map.inventory();
  const auto& rows = reference_rows();

  if (inv.speech_count() != 36) {
    violations.push_back({"speech inventory has " + std::to_string(inv.speech_count()) +
                          " phonemes, expected 36"});
  }
  if (map.speech_viseme_count() != static_cast<int>(rows.size())) {
    violations.push_back({"map has " + std::to_string(map.speech_viseme_count()) +
                          " speech visemes, expected " + std::to_string(rows.size())});
  }

  // Exact table membership, row by row.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int viseme = static_cast<int>(r) + 1;
    std::set<std::string> expected;
    for (const char* p : rows[r].phonemes) expected.insert(p);

    std::set<std::string> actual;
    for (int p = 1; p <= inv.speech_count(); ++p) {
      if (map.viseme_of(p) == viseme) actual.insert(inv.label(p));
    }
    for (const auto& label : expected) {
      if (!actual.count(label)) {
        violations.push_back({"phoneme '" + label + "' missing from viseme " +
                              std::to_string(viseme) + " (" + rows[r].label + ")"});
      }
    }
    for (const auto& label : actual) {
      if (!expected.count(label)) {
        violations.push_back({"phoneme '" + label + "' wrongly assigned to viseme " +
                              std::to_string(viseme) + " (" + rows[r].label + ")"});
      }
    }
    if (viseme <= map.viseme_count() && map.viseme_label(viseme) != rows[r].label) {
      violations.push_back({"viseme " + std::to_string(viseme) + " labeled '" +
                            map.viseme_label(viseme) + "', expected '" + rows[r].label + "'"});
    }
  }

  // Partition property over speech phonemes: every phoneme lands in exactly
  // one speech viseme class (totality makes "exactly one" a range check).
  for (int p = 1; p <= inv.speech_count(); ++p) {
    const int v = map.viseme_of(p);
    if (v < 1 || v > map.speech_viseme_count()) {
      violations.push_back({"speech phoneme '" + inv.label(p) + "' maps to viseme " +
                            std::to_string(v) + " outside 1.." +
                            std::to_string(map.speech_viseme_count())});
    }
  }
  if (inv.has_silence()) {
    if (!map.has_silence()) {
      violations.push_back({"inventory has silence but map lacks a silence viseme"});
    } else if (map.viseme_of(inv.silence_index()) != map.silence_viseme()) {
      violations.push_back({"'sil' does not map to the silence viseme"});
    }
  }
  return violations;
}

const std::vector<int>& PronunciationDict::pronounce(std::string_view word) const {
  auto it = entries_.find(lower(word));
  if (it == entries_.end()) {
    raise(Errc::unknown_word, "'" + std::string(word) + "' is not in the dictionary");
  }
  return it->second;
}

bool PronunciationDict::contains(std::string_view word) const {
  return entries_.count(lower(word)) > 0;
}

void PronunciationDict::insert(std::string word, std::vector<int> phonemes) {
  if (phonemes.empty()) {
    raise(Errc::invalid_argument, "pronunciation for '" + word + "' is empty");
  }
  entries_[lower(word)] = std::move(phonemes);
}

PronunciationDict parse_lexicon(std::istream& in, const PhonemeInventory& inventory,
                                std::string_view source_name) {
  PronunciationDict dict;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;  // blank or comment-only line
    std::vector<int> phonemes;
    std::string token;
    while (ss >> token) {
      const std::string label = PhonemeInventory::normalize_label(token);
      auto idx = inventory.index_of(label);
      if (!idx) {
        raise(Errc::unknown_phoneme, "'" + label + "' at " + std::string(source_name) +
                                         ":" + std::to_string(line_no));
      }
      phonemes.push_back(*idx);
    }
    if (phonemes.empty()) {
      raise(Errc::malformed_line, std::string(source_name) + ":" + std::to_string(line_no) +
                                      ": entry '" + word + "' has no phonemes");
    }
    dict.insert(lower(word), std::move(phonemes));
  }
  return dict;
}

PronunciationDict load_lexicon(const std::filesystem::path& path,
                               const PhonemeInventory& inventory) {
  std::ifstream in(path);
  if (!in) {
    raise(Errc::missing_file, "lexicon file '" + path.string() + "'");
  }
  return parse_lexicon(in, inventory, path.string());
}

std::string_view builtin_grid_lexicon_text() {
  // GRID sentence grammar: command color preposition letter digit adverb.
  static const char* text = R"(# GRID corpus vocabulary
# commands
bin b ih n
lay l ey
place p l ey s
set s eh t
# colors
blue b l uw
green g r iy n
red r eh d
white w ay t
# prepositions
at ae t
by b ay
in ih n
with w ih dh
# adverbs
again ah g eh n
now n aw
please p l iy z
soon s uw n
# letters (w is not spoken in GRID)
a ey
b b iy
c s iy
d d iy
e iy
f eh f
g jh iy
h ey ch
i ay
j jh ey
k k ey
l eh l
m eh m
n eh n
o ow
p p iy
q k y uw
r aa r
s eh s
t t iy
u y uw
v v iy
x eh k s
y w ay
z z eh d
# digits
zero z ih r ow
one w ah n
two t uw
three th r iy
four f ao r
five f ay v
six s ih k s
seven s eh v ah n
eight ey t
nine n ay n
)";
  return text;
}

const PronunciationDict& builtin_grid_lexicon() {
  static const PronunciationDict dict = [] {
    std::istringstream in{std::string(builtin_grid_lexicon_text())};
    return parse_lexicon(in, PhonemeInventory::with_silence(), "<builtin>");
  }();
  return dict;
}

}  // namespace lipread
