#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "studymap/corpus.hpp"
#include "studymap/geometry.hpp"
#include "studymap/random.hpp"

namespace studymap::test {

inline StudyRecord study(std::string id, std::string title, std::string abstract = {},
                         std::vector<std::string> keywords = {}, std::vector<std::string> references = {}) {
    StudyRecord s;
    s.id = std::move(id);
    s.entry_type = "article";
    s.title = std::move(title);
    s.abstract = std::move(abstract);
    s.keywords = std::move(keywords);
    s.references = std::move(references);
    return s;
}

// Pronounceable letter-only word; the leading syllable pins it to `group`.
inline std::string pseudo_word(std::size_t group, std::size_t index) {
    static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    static constexpr const char* kVowels[] = {"a", "o", "u"};
    std::string w = "q";
    w += kOnsets[group % 14];
    w += kVowels[group / 14 % 3];
    std::size_t x = index;
    for (int syl = 0; syl < 2; ++syl) {
        w += kOnsets[x % 14];
        x /= 14;
        w += kVowels[x % 3];
        x /= 3;
    }
    w += "x";  // a final consonant other than s/e keeps Porter from touching the word
    return w;
}

struct PlantedCorpus {
    Corpus corpus;
    std::vector<std::size_t> topic;  // planted label per study
};

// n studies spread round-robin over `topics`; each abstract draws
// `topic_words` terms from its topic's pool and `noise_words` from a shared pool.
inline PlantedCorpus planted_topics(std::size_t n, std::size_t topics, std::uint64_t seed,
                                    std::size_t topic_words = 12, std::size_t noise_words = 3) {
    Rng rng(seed);
    constexpr std::size_t kPool = 15;
    PlantedCorpus out;
    std::vector<StudyRecord> studies;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = i % topics;
        std::string text;
        for (std::size_t j = 0; j < topic_words; ++j) text += pseudo_word(t, rng.below(kPool)) + " ";
        for (std::size_t j = 0; j < noise_words; ++j) text += pseudo_word(40, rng.below(kPool)) + " ";
        studies.push_back(study("s" + std::to_string(i), "study " + pseudo_word(t, rng.below(kPool)), text));
        out.topic.push_back(t);
    }
    out.corpus = Corpus(std::move(studies));
    return out;
}

// True when p lies inside the convex hull of pts or within tol of its boundary.
inline bool in_convex_hull(Point2 p, std::vector<Point2> pts, double tol = 1e-9) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() == 1) return distance(p, pts[0]) <= tol;
    auto cross = [](Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) {
        // collinear input: p must lie on the segment
        const Point2 a = pts.front(), b = pts.back();
        if (distance_to_line(p, a, b) > tol) return false;
        const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / std::pow(distance(a, b), 2);
        return t >= -tol && t <= 1 + tol;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2 a = hull[i], b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < -tol * std::max(1.0, distance(a, b))) return false;
    }
    return true;
}

// Bibtex for n studies over three themes. Every study lists a few external
// references from its theme's pool; roughly one in three also cites an
// earlier study by title.
inline std::string review_bibtex(std::size_t n, std::uint64_t seed) {
    static const std::vector<std::vector<std::string>> kThemes = {
        {"software", "testing", "mutation", "coverage", "regression", "oracle", "fault", "generation"},
        {"visual", "mining", "document", "projection", "layout", "exploration", "interactive", "map"},
        {"requirements", "elicitation", "stakeholder", "specification", "traceability", "negotiation", "goal",
         "prioritization"},
    };
    Rng rng(seed);
    std::vector<std::string> titles;
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& theme = kThemes[i % kThemes.size()];
        auto pick = [&] { return theme[rng.below(theme.size())]; };
        std::string title = "On " + pick() + " and " + pick() + " " + pseudo_word(30 + i / 40, i % 40);
        std::string abstract;
        for (int w = 0; w < 25; ++w) abstract += pick() + (w % 6 == 5 ? ". " : " ");
        std::string refs;
        for (std::size_t r = 2 + rng.below(4); r > 0; --r) {
            const std::size_t j = rng.below(6);
            refs += (refs.empty() ? "" : "; ") + std::string("Author") + std::to_string(i % 3) + " " +
                    std::to_string(j) + ". Classic work on " + theme[j] + " " + pseudo_word(20 + i % 3, j) + ". 2005";
        }
        if (i > 0 && rng.below(3) == 0) refs += "; Someone E. " + titles[rng.below(i)] + ". 2011";
        out += "@article{s" + std::to_string(i + 1) + ",\n  title = {" + title + "},\n  abstract = {" + abstract +
               "},\n  keywords = {" + theme[0] + ", " + pick() + "},\n  year = {2011},\n  references = {" + refs +
               "}\n}\n\n";
        titles.push_back(title);
    }
    return out;
}

}  // namespace studymap::test
