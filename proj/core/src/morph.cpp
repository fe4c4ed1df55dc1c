#include "wuglab/morph.hpp"

#include <algorithm>

namespace wuglab::morph {

namespace {

constexpr char32_t kAuml = U'ä', kOuml = U'ö', kUuml = U'ü';
constexpr char32_t kAumlUp = U'Ä', kOumlUp = U'Ö', kUumlUp = U'Ü';
constexpr char32_t kSharpS = U'ß';

bool is_vowel_cp(char32_t c) {
    switch (c) {
        case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
        case U'A': case U'E': case U'I': case U'O': case U'U': case U'Y':
            return true;
        default:
            return c == kAuml || c == kOuml || c == kUuml || c == kAumlUp || c == kOumlUp || c == kUumlUp;
    }
}

bool is_back_vowel_cp(char32_t c) {
    return c == U'a' || c == U'o' || c == U'u' || c == U'A' || c == U'O' || c == U'U';
}

char32_t front_cp(char32_t c) {
    switch (c) {
        case U'a': return kAuml;
        case U'o': return kOuml;
        case U'u': return kUuml;
        case U'A': return kAumlUp;
        case U'O': return kOumlUp;
        case U'U': return kUumlUp;
    }
    return c;
}

char32_t lower_cp(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 32;
    if (c == kAumlUp) return kAuml;
    if (c == kOumlUp) return kOuml;
    if (c == kUumlUp) return kUuml;
    return c;
}

std::vector<char32_t> codepoints(const std::string& s) {
    std::vector<char32_t> cps;
    std::size_t i = 0;
    while (i < s.size()) cps.push_back(utf8_decode_at(s, i));
    return cps;
}

std::string from_codepoints(const std::vector<char32_t>& cps) {
    std::string out;
    for (char32_t c : cps) out += utf8_encode(c);
    return out;
}

Suffix suffix_of_marker(const std::string& marker) {
    if (marker == "er") return Suffix::ER;
    if (marker == "en" || marker == "n") return Suffix::EN;
    if (marker == "e") return Suffix::E;
    if (marker == "s") return Suffix::S;
    throw ArgumentError("unknown suffix marker: " + marker);
}

bool marker_admits_umlaut(const std::string& marker) {
    // Table-1 inventory: umlaut combines with e, zero and er only.
    return marker == "er" || marker == "e";
}

bool ends_with(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

const std::string& suffix_name(Suffix s) {
    static const std::array<std::string, kNumSuffixes> names = {"en", "e", "zero", "er", "s", "other"};
    return names[static_cast<std::size_t>(s)];
}

std::optional<Suffix> suffix_from_name(const std::string& name) {
    for (Suffix s : kAllSuffixes)
        if (suffix_name(s) == name) return s;
    return std::nullopt;
}

std::string PluralClass::to_string() const {
    return umlaut ? suffix_name(suffix) + "+uml" : suffix_name(suffix);
}

bool has_back_vowel(const std::string& s) {
    for (char32_t c : codepoints(s))
        if (is_back_vowel_cp(c)) return true;
    return false;
}

std::string umlautize(const std::string& stem) {
    auto cps = codepoints(stem);
    // rightmost back vowel; an `au` pair fronts as a unit (au -> äu)
    for (std::size_t k = cps.size(); k-- > 0;) {
        if (!is_back_vowel_cp(cps[k])) continue;
        if ((cps[k] == U'u' || cps[k] == U'U') && k > 0 && (cps[k - 1] == U'a' || cps[k - 1] == U'A')) {
            cps[k - 1] = front_cp(cps[k - 1]);
        } else {
            cps[k] = front_cp(cps[k]);
        }
        return from_codepoints(cps);
    }
    throw NoBackVowelError("no back vowel in stem: '" + stem + "'");
}

std::optional<std::string> try_umlautize(const std::string& stem) {
    if (!has_back_vowel(stem)) return std::nullopt;
    return umlautize(stem);
}

PluralClass classify_plural(const std::string& singular, const std::string& plural) {
    if (singular.empty() || plural.empty())
        throw ArgumentError("classify_plural: empty string");

    if (plural == singular) return {Suffix::ZERO, false};
    const auto umlauted = try_umlautize(singular);
    if (umlauted && plural == *umlauted) return {Suffix::ZERO, true};

    static const std::array<std::string, 5> markers = {"er", "en", "e", "n", "s"};
    for (const auto& marker : markers) {
        if (plural == singular + marker) return {suffix_of_marker(marker), false};
        if (umlauted && marker_admits_umlaut(marker) && plural == *umlauted + marker)
            return {suffix_of_marker(marker), true};
    }
    return {Suffix::OTHER, false};
}

std::string apply_class(const std::string& singular, PluralClass cls) {
    if (cls.suffix == Suffix::OTHER)
        throw ArgumentError("apply_class: 'other' has no constructive form");
    if (!cls.valid())
        throw ArgumentError("apply_class: umlaut cannot combine with " + suffix_name(cls.suffix));

    const std::string base = cls.umlaut ? umlautize(singular) : singular;
    switch (cls.suffix) {
        case Suffix::ZERO: return base;
        case Suffix::E: return base + "e";
        case Suffix::ER: return base + "er";
        case Suffix::S: return base + "s";
        case Suffix::EN: return base + (ends_with(singular, "e") ? "n" : "en");
        case Suffix::OTHER: break;
    }
    throw ArgumentError("apply_class: unreachable");
}

std::vector<std::pair<PluralClass, std::string>> candidate_forms(const std::string& singular) {
    if (singular.empty()) throw ArgumentError("candidate_forms: empty stem");
    const bool uml_ok = has_back_vowel(singular);

    std::vector<std::pair<PluralClass, std::string>> forms;
    const auto add = [&](Suffix s, bool uml) {
        const PluralClass c{s, uml};
        forms.emplace_back(c, apply_class(singular, c));
    };
    add(Suffix::ZERO, false);
    if (uml_ok) add(Suffix::ZERO, true);
    add(Suffix::E, false);
    if (uml_ok) add(Suffix::E, true);
    add(Suffix::EN, false);
    add(Suffix::ER, false);
    if (uml_ok) add(Suffix::ER, true);
    add(Suffix::S, false);
    return forms;
}

std::size_t syllable_count(const std::string& orth) {
    std::size_t clusters = 0;
    bool in_cluster = false;
    for (char32_t c : codepoints(orth)) {
        if (is_vowel_cp(c)) {
            if (!in_cluster) ++clusters;
            in_cluster = true;
        } else {
            in_cluster = false;
        }
    }
    return clusters;
}

std::string rhyme_key(const std::string& orth) {
    auto cps = codepoints(orth);
    for (auto& c : cps) c = lower_cp(c);

    // final vowel cluster [i, j) and coda [j, end)
    std::size_t j = cps.size();
    while (j > 0 && !is_vowel_cp(cps[j - 1])) --j;
    std::size_t i = j;
    while (i > 0 && is_vowel_cp(cps[i - 1])) --i;

    std::vector<char32_t> key(cps.begin() + static_cast<std::ptrdiff_t>(i),
                              cps.begin() + static_cast<std::ptrdiff_t>(j));
    // coda with doubled letters collapsed (orthographic gemination)
    char32_t prev = 0;
    for (std::size_t k = j; k < cps.size(); ++k) {
        if (cps[k] != prev) key.push_back(cps[k]);
        prev = cps[k];
    }
    // keep ß and ss equivalent in the coda
    std::vector<char32_t> norm;
    for (char32_t c : key) norm.push_back(c == kSharpS ? U's' : c);
    return from_codepoints(norm);
}

bool rhymes_with_stimuli(const std::string& lemma, const std::vector<std::string>& stimuli) {
    const std::string key = rhyme_key(lemma);
    if (key.empty()) return false;
    return std::any_of(stimuli.begin(), stimuli.end(),
                       [&](const std::string& s) { return rhyme_key(s) == key; });
}

ClassDistribution class_distribution(const corpus::NounLexicon& lexicon) {
    return class_distribution(lexicon, [](const corpus::Noun&) { return true; });
}

}  // namespace wuglab::morph
