#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "gek/diagnostics.hpp"

namespace gek {
namespace {

// Sorted by lemma for binary search.
constexpr std::pair<std::string_view, std::string_view> kIrregular[] = {
    {"arise", "arose"},     {"awake", "awoke"},       {"be", "was"},
    {"bear", "bore"},       {"beat", "beat"},         {"become", "became"},
    {"begin", "began"},     {"bend", "bent"},         {"bet", "bet"},
    {"bid", "bid"},         {"bind", "bound"},        {"bite", "bit"},
    {"bleed", "bled"},      {"blow", "blew"},         {"break", "broke"},
    {"breed", "bred"},      {"bring", "brought"},     {"broadcast", "broadcast"},
    {"build", "built"},     {"burn", "burnt"},        {"burst", "burst"},
    {"buy", "bought"},      {"cast", "cast"},         {"catch", "caught"},
    {"choose", "chose"},    {"cling", "clung"},       {"come", "came"},
    {"cost", "cost"},       {"creep", "crept"},       {"cut", "cut"},
    {"deal", "dealt"},      {"dig", "dug"},           {"do", "did"},
    {"draw", "drew"},       {"dream", "dreamt"},      {"drink", "drank"},
    {"drive", "drove"},     {"eat", "ate"},           {"fall", "fell"},
    {"feed", "fed"},        {"feel", "felt"},         {"fight", "fought"},
    {"find", "found"},      {"flee", "fled"},         {"fling", "flung"},
    {"fly", "flew"},        {"forbid", "forbade"},    {"forecast", "forecast"},
    {"foresee", "foresaw"}, {"forget", "forgot"},     {"forgive", "forgave"},
    {"freeze", "froze"},    {"get", "got"},           {"give", "gave"},
    {"go", "went"},         {"grind", "ground"},      {"grow", "grew"},
    {"hang", "hung"},       {"have", "had"},          {"hear", "heard"},
    {"hide", "hid"},        {"hit", "hit"},           {"hold", "held"},
    {"hurt", "hurt"},       {"keep", "kept"},         {"kneel", "knelt"},
    {"knit", "knit"},       {"know", "knew"},         {"lay", "laid"},
    {"lead", "led"},        {"lean", "leant"},        {"leap", "leapt"},
    {"learn", "learnt"},    {"leave", "left"},        {"lend", "lent"},
    {"let", "let"},         {"lie", "lay"},           {"light", "lit"},
    {"lose", "lost"},       {"make", "made"},         {"mean", "meant"},
    {"meet", "met"},        {"mislead", "misled"},    {"mistake", "mistook"},
    {"mow", "mowed"},       {"overcome", "overcame"}, {"overtake", "overtook"},
    {"pay", "paid"},        {"prove", "proved"},      {"put", "put"},
    {"quit", "quit"},       {"read", "read"},         {"rebuild", "rebuilt"},
    {"rid", "rid"},         {"ride", "rode"},         {"ring", "rang"},
    {"rise", "rose"},       {"run", "ran"},           {"saw", "sawed"},
    {"say", "said"},        {"see", "saw"},           {"seek", "sought"},
    {"sell", "sold"},       {"send", "sent"},         {"set", "set"},
    {"sew", "sewed"},       {"shake", "shook"},       {"shed", "shed"},
    {"shine", "shone"},     {"shoot", "shot"},        {"show", "showed"},
    {"shrink", "shrank"},   {"shut", "shut"},         {"sing", "sang"},
    {"sink", "sank"},       {"sit", "sat"},           {"slay", "slew"},
    {"sleep", "slept"},     {"slide", "slid"},        {"sling", "slung"},
    {"slit", "slit"},       {"smell", "smelt"},       {"sow", "sowed"},
    {"speak", "spoke"},     {"speed", "sped"},        {"spend", "spent"},
    {"spill", "spilt"},     {"spin", "spun"},         {"spit", "spat"},
    {"split", "split"},     {"spoil", "spoilt"},      {"spread", "spread"},
    {"spring", "sprang"},   {"stand", "stood"},       {"steal", "stole"},
    {"stick", "stuck"},     {"sting", "stung"},       {"stink", "stank"},
    {"stride", "strode"},   {"strike", "struck"},     {"string", "strung"},
    {"strive", "strove"},   {"swear", "swore"},       {"sweep", "swept"},
    {"swim", "swam"},       {"swing", "swung"},       {"take", "took"},
    {"teach", "taught"},    {"tear", "tore"},         {"tell", "told"},
    {"think", "thought"},   {"throw", "threw"},       {"thrust", "thrust"},
    {"tread", "trod"},      {"undergo", "underwent"}, {"understand", "understood"},
    {"undertake", "undertook"}, {"undo", "undid"},    {"upset", "upset"},
    {"wake", "woke"},       {"wear", "wore"},         {"weave", "wove"},
    {"weep", "wept"},       {"win", "won"},           {"wind", "wound"},
    {"withdraw", "withdrew"}, {"wring", "wrung"},     {"write", "wrote"},
};

// Multi-syllable verbs with final stress that double their last consonant.
constexpr std::string_view kDoubling[] = {
    "admit",   "commit",  "compel", "control", "deter",   "equip",  "expel",
    "extol",   "incur",   "occur",  "omit",    "patrol",  "permit", "prefer",
    "propel",  "rebel",   "recur",  "refer",   "regret",  "submit", "transfer",
    "transmit"};

constexpr std::string_view kTakesK[] = {"mimic", "panic", "picnic", "traffic"};

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

int vowel_groups(std::string_view word) {
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

template <std::size_t N>
bool listed(const std::string_view (&list)[N], std::string_view word) {
  return std::find(std::begin(list), std::end(list), word) != std::end(list);
}

std::string regular_past(std::string_view w) {
  std::string word(w);
  const auto n = word.size();
  if (listed(kTakesK, word)) return word + "ked";
  if (word.back() == 'e') return word + "d";
  if (n >= 2 && word.back() == 'y' && !is_vowel(word[n - 2])) {
    return word.substr(0, n - 1) + "ied";
  }
  const bool cvc = n >= 3 && !is_vowel(word[n - 1]) && is_vowel(word[n - 2]) &&
                   !is_vowel(word[n - 3]) && std::string_view("wxy").find(word.back()) == std::string_view::npos;
  if (listed(kDoubling, word) || (cvc && vowel_groups(word) == 1)) {
    return word + word.back() + "ed";
  }
  return word + "ed";
}

}  // namespace

std::optional<std::string_view> irregular_past(std::string_view lemma) {
  auto it = std::lower_bound(std::begin(kIrregular), std::end(kIrregular), lemma,
                             [](const auto& entry, std::string_view key) { return entry.first < key; });
  if (it != std::end(kIrregular) && it->first == lemma) return it->second;
  return std::nullopt;
}

std::string past_tense(std::string_view lemma) {
  auto underscore = lemma.find('_');
  std::string_view head = lemma.substr(0, underscore);
  if (head.empty() || !std::all_of(head.begin(), head.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    throw RealizationError("cannot inflect verb '" + std::string(lemma) +
                           "': not in the irregular table and not a plain lowercase word");
  }
  std::string past = irregular_past(head) ? std::string(*irregular_past(head)) : regular_past(head);
  if (underscore != std::string_view::npos) past += lemma.substr(underscore);
  return past;
}

}  // namespace gek
