#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wuglab/corpus.hpp"

namespace wuglab::morph {

/// The six plural suffix categories, in report row order.
enum class Suffix : std::uint8_t { EN = 0, E = 1, ZERO = 2, ER = 3, S = 4, OTHER = 5 };

constexpr std::size_t kNumSuffixes = 6;
constexpr std::array<Suffix, kNumSuffixes> kAllSuffixes = {
    Suffix::EN, Suffix::E, Suffix::ZERO, Suffix::ER, Suffix::S, Suffix::OTHER};

/// "en", "e", "zero", "er", "s", "other" — the names used in all reports.
const std::string& suffix_name(Suffix s);
std::optional<Suffix> suffix_from_name(const std::string& name);

/// A suffix category plus an umlaut flag. Umlaut may combine only with
/// E, ZERO and ER; OTHER never carries umlaut.
struct PluralClass {
    Suffix suffix = Suffix::OTHER;
    bool umlaut = false;

    bool operator==(const PluralClass&) const = default;
    bool valid() const {
        if (umlaut)
            return suffix == Suffix::E || suffix == Suffix::ZERO || suffix == Suffix::ER;
        return true;
    }
    std::string to_string() const;  // e.g. "e", "e+uml", "zero", "other"
};

/// True if the string contains a back vowel (a, o, u, case-insensitive).
bool has_back_vowel(const std::string& s);

/// Fronts the rightmost back-vowel cluster: au->äu, a->ä, o->ö, u->ü
/// (uppercase likewise). All other characters unchanged.
/// NoBackVowelError when the stem has no back vowel.
std::string umlautize(const std::string& stem);

/// umlautize, or nullopt instead of the error.
std::optional<std::string> try_umlautize(const std::string& stem);

/// Total classification of a (singular, plural) pair. Match order:
///   1. plural == singular                  -> (ZERO, false)
///   2. plural == umlautize(singular)       -> (ZERO, true)
///   3. plural == base + suffix, suffix tried longest-first
///      ("er","en","e","n","s"), base plain then umlauted where the
///      suffix admits umlaut; "n" maps to EN
///   4. anything else                       -> (OTHER, false)
PluralClass classify_plural(const std::string& singular, const std::string& plural);

/// Inverse direction: constructs the plural form for a class. EN surfaces
/// as "+n" when the stem ends in e, else "+en". OTHER is unsupported;
/// umlaut on an umlaut-less stem raises NoBackVowelError.
std::string apply_class(const std::string& singular, PluralClass cls);

/// The rating-task candidate inventory for a stem, in presentation order:
/// zero, zero+uml, e, e+uml, en, er, er+uml, s — umlaut variants only when
/// the stem has a back vowel (8 forms), else 5 forms.
std::vector<std::pair<PluralClass, std::string>> candidate_forms(const std::string& singular);

/// Number of maximal vowel-letter clusters (a,e,i,o,u,ä,ö,ü,y; case-insensitive).
std::size_t syllable_count(const std::string& orth);

/// Rhyme key: final vowel cluster plus trailing consonant letters,
/// lowercased, with doubled coda letters collapsed (so Fall rhymes
/// with Bral).
std::string rhyme_key(const std::string& orth);

/// True iff the lemma's rhyme key equals that of any stimulus form.
bool rhymes_with_stimuli(const std::string& lemma, const std::vector<std::string>& stimuli);

// ---------------------------------------------------------------------------
// Corpus statistics
// ---------------------------------------------------------------------------

struct ClassDistribution {
    std::array<std::size_t, kNumSuffixes> count{};  // indexed by Suffix
    std::array<double, kNumSuffixes> percent{};     // of n, umlaut folded in
    std::size_t n = 0;
    bool defined = false;  // false iff the selection was empty
};

/// Classifies every retained noun and tabulates percentage per suffix
/// (umlaut folded into its suffix class).
template <typename Pred>
ClassDistribution class_distribution(const corpus::NounLexicon& lexicon, Pred&& keep) {
    ClassDistribution dist;
    for (const auto& noun : lexicon.entries) {
        if (!keep(noun)) continue;
        const PluralClass c = classify_plural(noun.lemma, noun.plural);
        ++dist.count[static_cast<std::size_t>(c.suffix)];
        ++dist.n;
    }
    if (dist.n > 0) {
        dist.defined = true;
        for (std::size_t i = 0; i < kNumSuffixes; ++i)
            dist.percent[i] = 100.0 * static_cast<double>(dist.count[i]) / static_cast<double>(dist.n);
    }
    return dist;
}

ClassDistribution class_distribution(const corpus::NounLexicon& lexicon);

}  // namespace wuglab::morph
