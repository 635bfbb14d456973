// Porter stemmer, following the rule tables of the 1980 algorithm description
// (no later departures such as "logi" -> "log" or "bli" -> "ble").

#include <array>
#include <string>
#include <string_view>

#include "studymap/text.hpp"

namespace studymap {
namespace {

class Word {
public:
    explicit Word(std::string_view w) : b_(w) {}

    std::string take() && { return std::move(b_); }
    std::size_t size() const { return b_.size(); }

    bool consonant(std::size_t i) const {
        switch (b_[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 || !consonant(i - 1);
            default: return true;
        }
    }

    // number of VC sequences in b_[0, len)
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && consonant(i)) ++i;
        while (i < len) {
            while (i < len && !consonant(i)) ++i;
            if (i >= len) break;
            while (i < len && consonant(i)) ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i)
            if (!consonant(i)) return true;
        return false;
    }

    bool double_consonant(std::size_t len) const {
        return len >= 2 && b_[len - 1] == b_[len - 2] && consonant(len - 1);
    }

    // cvc where the final c is not w, x or y
    bool cvc(std::size_t len) const {
        if (len < 3 || !consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) return false;
        char c = b_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view suffix) const {
        return b_.size() >= suffix.size() && std::string_view(b_).substr(b_.size() - suffix.size()) == suffix;
    }

    char last() const { return b_.back(); }
    char at(std::size_t i) const { return b_[i]; }

    void replace_suffix(std::size_t suffix_len, std::string_view with) {
        b_.replace(b_.size() - suffix_len, suffix_len, with);
    }

private:
    std::string b_;
};

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

enum class Condition { m_gt0, m_gt1 };

// Applies the rule with the longest matching suffix, if its condition holds.
template <std::size_t N>
void apply_longest(Word& w, const std::array<Rule, N>& rules, Condition cond) {
    const Rule* best = nullptr;
    for (const auto& r : rules)
        if (w.ends(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
    if (!best) return;
    const std::size_t stem = w.size() - best->suffix.size();
    const int m = w.measure(stem);
    if ((cond == Condition::m_gt0 && m > 0) || (cond == Condition::m_gt1 && m > 1))
        w.replace_suffix(best->suffix.size(), best->replacement);
}

void step1a(Word& w) {
    if (w.ends("sses")) w.replace_suffix(4, "ss");
    else if (w.ends("ies")) w.replace_suffix(3, "i");
    else if (w.ends("ss")) return;
    else if (w.ends("s")) w.replace_suffix(1, "");
}

void step1b(Word& w) {
    if (w.ends("eed")) {
        if (w.measure(w.size() - 3) > 0) w.replace_suffix(3, "ee");
        return;
    }
    std::size_t cut = 0;
    if (w.ends("ed") && w.has_vowel(w.size() - 2)) cut = 2;
    else if (w.ends("ing") && w.has_vowel(w.size() - 3)) cut = 3;
    if (cut == 0) return;
    w.replace_suffix(cut, "");

    if (w.ends("at")) w.replace_suffix(2, "ate");
    else if (w.ends("bl")) w.replace_suffix(2, "ble");
    else if (w.ends("iz")) w.replace_suffix(2, "ize");
    else if (w.double_consonant(w.size())) {
        char c = w.last();
        if (c != 'l' && c != 's' && c != 'z') w.replace_suffix(1, "");
    } else if (w.measure(w.size()) == 1 && w.cvc(w.size())) {
        w.replace_suffix(0, "e");
    }
}

void step1c(Word& w) {
    if (w.ends("y") && w.has_vowel(w.size() - 1)) w.replace_suffix(1, "i");
}

constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},  {"izer", "ize"},
    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},  {"eli", "e"},      {"ousli", "ous"},
    {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},   {"alism", "al"},   {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},   {"iviti", "ive"},  {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
}};

constexpr std::array<std::string_view, 19> kStep4{
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
    "ent", "ion", "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
};

void step4(Word& w) {
    std::string_view best;
    for (auto s : kStep4)
        if (w.ends(s) && s.size() > best.size()) best = s;
    if (best.empty()) return;
    const std::size_t stem = w.size() - best.size();
    if (w.measure(stem) <= 1) return;
    if (best == "ion" && !(stem > 0 && (w.at(stem - 1) == 's' || w.at(stem - 1) == 't'))) return;
    w.replace_suffix(best.size(), "");
}

void step5(Word& w) {
    if (w.ends("e")) {
        const std::size_t stem = w.size() - 1;
        const int m = w.measure(stem);
        if (m > 1 || (m == 1 && !w.cvc(stem))) w.replace_suffix(1, "");
    }
    if (w.measure(w.size()) > 1 && w.double_consonant(w.size()) && w.last() == 'l') w.replace_suffix(1, "");
}

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.empty()) return {};
    Word w(word);
    step1a(w);
    if (w.size() == 0) return std::move(w).take();
    step1b(w);
    step1c(w);
    apply_longest(w, kStep2, Condition::m_gt0);
    apply_longest(w, kStep3, Condition::m_gt0);
    step4(w);
    if (w.size() > 0) step5(w);
    return std::move(w).take();
}

std::string fold_agent_suffix(std::string_view porter_output) {
    if (porter_output.size() <= 2 || !porter_output.ends_with("er")) return std::string(porter_output);
    Word w(porter_output);
    const std::size_t stem = porter_output.size() - 2;
    if (w.measure(stem) >= 1) return std::string(porter_output.substr(0, stem));
    return std::string(porter_output);
}

}  // namespace studymap
