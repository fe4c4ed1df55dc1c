#include "wuglab/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace wuglab::corpus {

char gender_char(Gender g) {
    switch (g) {
        case Gender::M: return 'm';
        case Gender::F: return 'f';
        case Gender::N: return 'n';
    }
    return '?';
}

Gender gender_from_char(char c) {
    switch (c) {
        case 'm': case 'M': return Gender::M;
        case 'f': case 'F': return Gender::F;
        case 'n': case 'N': return Gender::N;
    }
    throw DataError(std::string("gender value outside {m,f,n}: '") + c + "'");
}

namespace {

bool bundle_has(const std::vector<std::string>& feats, std::string_view f) {
    return std::find(feats.begin(), feats.end(), f) != feats.end();
}

}  // namespace

std::vector<LemmaPluralPair> parse_unimorph(std::string_view text, ParseReport* report) {
    ParseReport local;
    // per-lemma slots, in first-appearance order
    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<std::optional<std::string>, std::optional<std::string>>> slots;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (pos > text.size() + 1) break;
        if (line.empty() || line[0] == '#') {
            if (eol == text.size()) break;
            continue;
        }
        ++local.lines_total;
        const auto cols = split(line, '\t');
        if (cols.size() != 3)
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 tab-separated columns, got " +
                             std::to_string(cols.size()));
        const std::string& lemma = cols[0];
        const std::string& form = cols[1];
        const auto feats = split(cols[2], ';');
        const bool nom = bundle_has(feats, "NOM");
        const bool sg = bundle_has(feats, "SG");
        const bool pl = bundle_has(feats, "PL");
        if (!nom || (!sg && !pl)) {
            ++local.rows_discarded;
        } else {
            auto it = slots.find(lemma);
            if (it == slots.end()) {
                order.push_back(lemma);
                it = slots.emplace(lemma, std::pair<std::optional<std::string>, std::optional<std::string>>{}).first;
            }
            auto& slot = it->second;
            if (sg) {
                if (!slot.first) slot.first = form;
                // repeated NOM;SG rows with the same form are common in the
                // source tables; only the first is used either way
            } else {
                if (!slot.second)
                    slot.second = form;
                else
                    ++local.duplicate_plurals;
            }
        }
        if (eol == text.size()) break;
    }

    std::vector<LemmaPluralPair> pairs;
    pairs.reserve(order.size());
    for (const auto& lemma : order) {
        const auto& slot = slots[lemma];
        if (slot.first && slot.second) pairs.emplace_back(lemma, *slot.second);
    }
    if (report) *report = local;
    return pairs;
}

std::map<std::string, Gender> load_gender_map(std::string_view text) {
    std::map<std::string, Gender> out;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2)
            throw ParseError("gender map line " + std::to_string(line_no) + ": expected `lemma,gender`");
        const std::string g = trim(cols[1]);
        if (g.size() != 1) throw DataError("gender map line " + std::to_string(line_no) + ": gender value outside {m,f,n}: '" + g + "'");
        out.emplace(trim(cols[0]), gender_from_char(g[0]));
    }
    return out;
}

NounLexicon merge_gender(const std::vector<LemmaPluralPair>& pairs,
                         const std::map<std::string, Gender>& gender_map,
                         MergeReport* report) {
    MergeReport local;
    NounLexicon lex;
    lex.entries.reserve(pairs.size());
    std::set<std::pair<std::string, Gender>> seen;
    for (const auto& [lemma, plural] : pairs) {
        const auto it = gender_map.find(lemma);
        if (it == gender_map.end()) {
            ++local.dropped_missing_gender;
            continue;
        }
        if (!seen.emplace(lemma, it->second).second) {
            ++local.duplicate_entries;
            continue;
        }
        lex.entries.push_back(Noun{lemma, plural, it->second});
    }
    if (report) *report = local;
    return lex;
}

SplitAssignment make_splits(const NounLexicon& lexicon, SplitCounts counts, std::uint64_t seed) {
    const std::size_t n = lexicon.entries.size();
    if (counts.train + counts.dev + counts.test != n)
        throw ArgumentError("make_splits: counts sum to " +
                            std::to_string(counts.train + counts.dev + counts.test) +
                            " but lexicon has " + std::to_string(n) + " entries");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);

    SplitAssignment sa;
    sa.seed = seed;
    sa.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(counts.train));
    sa.dev.assign(idx.begin() + static_cast<std::ptrdiff_t>(counts.train),
                  idx.begin() + static_cast<std::ptrdiff_t>(counts.train + counts.dev));
    sa.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(counts.train + counts.dev), idx.end());
    return sa;
}

SplitCounts default_split_counts(std::size_t lexicon_size) {
    if (lexicon_size == 11243) return {8694, 1229, 1320};
    SplitCounts c;
    c.dev = static_cast<std::size_t>(static_cast<double>(lexicon_size) * (1229.0 / 11243.0));
    c.test = static_cast<std::size_t>(static_cast<double>(lexicon_size) * (1320.0 / 11243.0));
    c.train = lexicon_size - c.dev - c.test;  // remainder to train
    return c;
}

// ---------------------------------------------------------------------------

Vocab Vocab::build(const std::vector<std::string>& strings) {
    std::set<std::string> chars;
    for (const auto& s : strings)
        for (auto& c : utf8_chars(s)) chars.insert(std::move(c));

    Vocab v;
    v.tokens_ = {"<pad>", "<bos>", "<eos>", "<m>", "<f>", "<n>"};
    v.tokens_.insert(v.tokens_.end(), chars.begin(), chars.end());
    for (std::size_t i = 0; i < v.tokens_.size(); ++i)
        v.index_.emplace(v.tokens_[i], static_cast<std::int32_t>(i));
    return v;
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
    static const std::vector<std::string> specials = {"<pad>", "<bos>", "<eos>", "<m>", "<f>", "<n>"};
    if (tokens.size() < specials.size())
        throw DataError("vocabulary token list too short");
    for (std::size_t i = 0; i < specials.size(); ++i)
        if (tokens[i] != specials[i])
            throw DataError("vocabulary token list is missing special token " + specials[i]);
    Vocab v;
    v.tokens_ = std::move(tokens);
    for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
        if (!v.index_.emplace(v.tokens_[i], static_cast<std::int32_t>(i)).second)
            throw DataError("duplicate vocabulary token: " + v.tokens_[i]);
    }
    return v;
}

std::int32_t Vocab::gender_token(Gender g) const {
    switch (g) {
        case Gender::M: return 3;
        case Gender::F: return 4;
        case Gender::N: return 5;
    }
    throw ArgumentError("bad gender");
}

std::int32_t Vocab::id(const std::string& token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) throw EncodingError("character not in vocabulary: '" + token + "'");
    return it->second;
}

std::optional<std::int32_t> Vocab::find(const std::string& token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocab::token(std::int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
        throw ArgumentError("token id out of range: " + std::to_string(id));
    return tokens_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocab::hash() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& t : tokens_) {
        h = mix_seed(h, fnv1a64(t));
    }
    return h;
}

TokenSeq encode_input(const std::string& lemma, Gender gender, const Vocab& vocab) {
    if (lemma.empty()) throw EncodingError("encode_input: empty lemma");
    TokenSeq seq;
    seq.push_back(vocab.gender_token(gender));
    for (const auto& c : utf8_chars(lemma)) seq.push_back(vocab.id(c));
    seq.push_back(Vocab::kEos);
    return seq;
}

TokenSeq encode_input(const Noun& noun, const Vocab& vocab) {
    return encode_input(noun.lemma, noun.gender, vocab);
}

TokenSeq encode_target(const std::string& plural, const Vocab& vocab) {
    if (plural.empty()) throw EncodingError("encode_target: empty plural");
    TokenSeq seq;
    for (const auto& c : utf8_chars(plural)) seq.push_back(vocab.id(c));
    seq.push_back(Vocab::kEos);
    return seq;
}

TokenSeq encode_target(const Noun& noun, const Vocab& vocab) {
    return encode_target(noun.plural, vocab);
}

std::string decode_tokens(const TokenSeq& seq, const Vocab& vocab) {
    std::string out;
    for (const auto id : seq) {
        if (id == Vocab::kEos) break;
        if (id == Vocab::kPad || id == Vocab::kBos) continue;
        if (id >= 3 && id <= 5) continue;  // gender tags
        out += vocab.token(id);
    }
    return out;
}

}  // namespace wuglab::corpus
