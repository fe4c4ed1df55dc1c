#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wuglab/util.hpp"

namespace wuglab::corpus {

enum class Gender : std::uint8_t { M, F, N };

char gender_char(Gender g);                       // 'm' / 'f' / 'n'
Gender gender_from_char(char c);                  // DataError on anything else

/// One lexical entry: orthographic nominative singular and plural plus
/// grammatical gender. Capitalization is preserved and comparisons are
/// case-sensitive throughout.
struct Noun {
    std::string lemma;
    std::string plural;
    Gender gender = Gender::N;
};

struct NounLexicon {
    std::vector<Noun> entries;
    std::vector<std::string> provenance;  // source file identifiers
};

/// Singular/plural pair as read from the inflection table, before gender merge.
using LemmaPluralPair = std::pair<std::string, std::string>;

struct ParseReport {
    std::size_t lines_total = 0;
    std::size_t rows_discarded = 0;        // non-nominative / non-number rows
    std::size_t duplicate_plurals = 0;     // extra NOM;PL rows for a seen lemma
};

/// Reads tab-separated `lemma<TAB>form<TAB>feature-bundle` rows and returns
/// one (singular, plural) pair per lemma that has both a NOM;SG and a NOM;PL
/// row. Pairing is by lemma field; lemma order follows first appearance.
/// A lemma with several NOM;PL rows keeps the first and counts the rest.
std::vector<LemmaPluralPair> parse_unimorph(std::string_view text, ParseReport* report = nullptr);

/// Two-column `lemma,gender` file with gender in {m,f,n}.
std::map<std::string, Gender> load_gender_map(std::string_view text);

struct MergeReport {
    std::size_t dropped_missing_gender = 0;
    std::size_t duplicate_entries = 0;  // repeated (lemma, gender) pairs
};

/// Attaches genders to parsed pairs. Pairs whose lemma is absent from the
/// map are dropped and counted; duplicate (lemma, gender) entries keep the
/// first occurrence. |result| + dropped + duplicates = |pairs|.
NounLexicon merge_gender(const std::vector<LemmaPluralPair>& pairs,
                         const std::map<std::string, Gender>& gender_map,
                         MergeReport* report = nullptr);

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

struct SplitCounts {
    std::size_t train = 0;
    std::size_t dev = 0;
    std::size_t test = 0;
};

struct SplitAssignment {
    std::vector<std::size_t> train;
    std::vector<std::size_t> dev;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

/// Uniform seeded shuffle of [0, |lexicon|), partitioned by counts.
/// counts must sum to |lexicon|. Deterministic per (lexicon size, seed).
SplitAssignment make_splits(const NounLexicon& lexicon, SplitCounts counts, std::uint64_t seed);

/// The paper-scale absolute counts when the lexicon has exactly 11,243
/// entries; otherwise the same proportions (77.3/10.9/11.8), remainder
/// to train.
SplitCounts default_split_counts(std::size_t lexicon_size);

// ---------------------------------------------------------------------------
// Vocabulary and token sequences
// ---------------------------------------------------------------------------

using TokenSeq = std::vector<std::int32_t>;

/// Character vocabulary plus the special tokens. Index 0 is <pad>.
class Vocab {
  public:
    static constexpr std::int32_t kPad = 0;
    static constexpr std::int32_t kBos = 1;
    static constexpr std::int32_t kEos = 2;

    /// Builds from the characters of the given strings (typically training
    /// split lemmas + plurals, plus wug stimuli forms). Character order is
    /// sorted for stability across runs.
    static Vocab build(const std::vector<std::string>& strings);

    /// Restores a vocabulary from an exact token list (e.g. a run
    /// directory's vocab file). The special-token prefix must be intact.
    static Vocab from_tokens(std::vector<std::string> tokens);

    std::int32_t gender_token(Gender g) const;
    std::int32_t id(const std::string& token) const;      // EncodingError if unknown
    std::optional<std::int32_t> find(const std::string& token) const;
    const std::string& token(std::int32_t id) const;
    std::size_t size() const { return tokens_.size(); }

    /// FNV-1a over the token list; recorded in checkpoint metadata so a
    /// checkpoint can be matched to the vocabulary it was trained with.
    std::uint64_t hash() const;

    const std::vector<std::string>& tokens() const { return tokens_; }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::int32_t> index_;
};

/// <gender> lemma-chars <eos>. EncodingError (naming the character) on any
/// character missing from the vocabulary; empty lemma is an error.
TokenSeq encode_input(const Noun& noun, const Vocab& vocab);
TokenSeq encode_input(const std::string& lemma, Gender gender, const Vocab& vocab);

/// plural-chars <eos>.
TokenSeq encode_target(const Noun& noun, const Vocab& vocab);
TokenSeq encode_target(const std::string& plural, const Vocab& vocab);

/// Concatenates character tokens, stopping at the first <eos>; skips the
/// gender tags and <bos>/<pad>. Inverse of encode_target up to <eos>.
std::string decode_tokens(const TokenSeq& seq, const Vocab& vocab);

}  // namespace wuglab::corpus
