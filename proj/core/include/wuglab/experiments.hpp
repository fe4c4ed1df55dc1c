#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wuglab/corpus.hpp"
#include "wuglab/morph.hpp"
#include "wuglab/seq2seq.hpp"
#include "wuglab/stimuli.hpp"

namespace wuglab::experiments {

using corpus::TokenSeq;
using morph::kNumSuffixes;

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainConfig {
    std::size_t batch_size = 20;
    std::size_t epochs = 10;
    double dropout = 0.3;
    double adadelta_decay = 0.95;
    double adadelta_eps = 1e-6;
    double clip_norm = 5.0;  // global L2 clip before each update; <= 0 disables

    std::vector<std::uint64_t> seeds = default_seeds(25);
    corpus::SplitCounts splits{};   // all-zero -> corpus::default_split_counts
    std::uint64_t split_seed = 1;   // one split shared by every seed
    std::size_t subsample = 0;      // 0 = full lexicon, else deterministic subsample

    std::size_t beam_width = 12;
    std::size_t max_len_margin = 5;     // decode cap: input length + margin
    std::size_t dev_beam_width = 1;     // greedy dev tracking between epochs
    std::size_t jobs = 1;               // worker threads (batch examples / eval items)
    bool eval_split_accuracy = true;    // post-training beam accuracy per split

    seq2seq::ModelConfig model;

    static std::vector<std::uint64_t> default_seeds(std::size_t n);
};

/// One training/evaluation example: the noun plus its encoded sequences.
struct Example {
    std::string lemma;
    std::string plural;
    corpus::Gender gender = corpus::Gender::N;
    TokenSeq input;
    TokenSeq target;
};

std::vector<Example> make_examples(const corpus::NounLexicon& lexicon,
                                   std::span<const std::size_t> indices, const corpus::Vocab& vocab);

/// First n entries of a seeded shuffle; provenance is preserved.
corpus::NounLexicon subsample_lexicon(const corpus::NounLexicon& lexicon, std::size_t n,
                                      std::uint64_t seed);

/// Splits, vocabulary (training split plus stimuli characters) and encoded
/// datasets shared by every seed of a sweep.
struct ExperimentData {
    corpus::SplitAssignment splits;
    corpus::Vocab vocab;
    std::vector<Example> train_set, dev_set, test_set;
};

ExperimentData prepare_data(const corpus::NounLexicon& lexicon, const TrainConfig& config,
                            const std::vector<WugItem>& stimuli);

struct EpochStats {
    std::size_t epoch = 0;        // 1-based
    double train_loss = 0.0;      // mean per-token NLL over the epoch
    double dev_exact_pct = 0.0;   // greedy exact match on the dev set
};

struct TrainResult {
    seq2seq::ModelParams params;
    std::vector<EpochStats> history;
};

/// Seeded-shuffle epochs, batches of config.batch_size, teacher-forced loss,
/// norm-clipped Adadelta updates. Returns the parameters after the final
/// configured epoch (no early stop) plus the per-epoch history.
/// A non-finite loss aborts with a diagnostic NumericError.
TrainResult train(seq2seq::ModelParams params, const std::vector<Example>& train_set,
                  const std::vector<Example>& dev_set, const TrainConfig& config);

struct PrfRow {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    std::size_t gold_count = 0, predicted_count = 0;
};

struct PrfTable {
    std::array<PrfRow, kNumSuffixes> rows{};                          // by Suffix
    std::array<std::array<std::size_t, kNumSuffixes>, kNumSuffixes> confusion{};  // [gold][pred]
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    TrainResult result;
    double train_acc = 0.0, dev_acc = 0.0, test_acc = 0.0;  // beam exact match
    PrfTable test_prf;
};

struct SweepResult {
    std::vector<SeedOutcome> outcomes;

    std::vector<const seq2seq::ModelParams*> ensemble() const;  // successful seeds
};

/// Trains every seed in config.seeds on identical splits; per-seed failures
/// are reported in the outcome and do not stop the others.
SweepResult sweep(const ExperimentData& data, const TrainConfig& config);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Percentage of items whose top-1 beam output string equals the gold plural.
double exact_accuracy(const seq2seq::ModelParams& params, const std::vector<Example>& dataset,
                      std::size_t beam_width = seq2seq::kDefaultBeamWidth, std::size_t jobs = 1,
                      std::size_t max_len_margin = 5);

/// Per-class precision/recall/F1 with predicted and gold classes both
/// obtained from the rule classifier (umlaut folded into suffix).
PrfTable suffix_prf(const seq2seq::ModelParams& params, const std::vector<Example>& dataset,
                    const corpus::Vocab& vocab, std::size_t beam_width = seq2seq::kDefaultBeamWidth,
                    std::size_t jobs = 1, std::size_t max_len_margin = 5);

/// Computes a PrfTable from already-classified pairs (test oracle entry).
PrfTable prf_from_pairs(std::span<const std::pair<morph::Suffix, morph::Suffix>> gold_pred);

/// Elementwise mean of precision/recall/F1 across tables (counts summed).
PrfTable average_prf(std::span<const PrfTable> tables);

/// One decode pass yielding both exact-match accuracy and the PRF table.
struct SplitEval {
    double exact_pct = 0.0;
    PrfTable prf;
};
SplitEval evaluate_split(const seq2seq::ModelParams& params, const std::vector<Example>& dataset,
                         const corpus::Vocab& vocab, std::size_t beam_width = seq2seq::kDefaultBeamWidth,
                         std::size_t jobs = 1, std::size_t max_len_margin = 5);

// ---------------------------------------------------------------------------
// Wug productions and rank profiles
// ---------------------------------------------------------------------------

struct DecodedForm {
    std::string form;
    double log_prob = 0.0;
    bool finished = false;
};

/// Beam outputs for every (seed, stimulus) pair; the shared input of
/// wug_productions and rank_profile, so their rank-1 marginals agree
/// exactly.
struct StimulusBeams {
    std::vector<std::uint64_t> seeds;
    std::vector<WugItem> items;
    // outputs[s][i]: ranked decoded forms for seed s on item i
    std::vector<std::vector<std::vector<DecodedForm>>> outputs;
};

/// Encodes each stimulus with the neuter tag and beam-decodes it under
/// every ensemble member.
StimulusBeams decode_stimuli(std::span<const seq2seq::ModelParams* const> ensemble,
                             const std::vector<WugItem>& stimuli, const corpus::Vocab& vocab,
                             std::size_t beam_width = seq2seq::kDefaultBeamWidth, std::size_t jobs = 1,
                             std::size_t max_len_margin = 5);

struct WugReport {
    std::vector<WugItem> items;
    std::vector<std::array<double, kNumSuffixes>> item_prop;     // per item, sums to 1
    std::array<std::size_t, kNumSuffixes> rhyme_count{}, nonrhyme_count{};
    std::array<double, kNumSuffixes> rhyme_pct{}, nonrhyme_pct{};
    std::size_t n_rhyme = 0, n_nonrhyme = 0;  // productions per category
    std::vector<std::uint64_t> seeds;
};

/// Top-1 productions classified against each stimulus, aggregated per item
/// and per rhyme/non-rhyme category; every seed contributes one production
/// per item.
WugReport wug_productions(const StimulusBeams& beams);
WugReport wug_productions(std::span<const seq2seq::ModelParams* const> ensemble,
                          const std::vector<WugItem>& stimuli, const corpus::Vocab& vocab,
                          std::size_t beam_width = seq2seq::kDefaultBeamWidth, std::size_t jobs = 1);

struct RankProfile {
    std::size_t k = 0;
    std::vector<std::array<std::size_t, kNumSuffixes>> rank_count;  // [rank-1][class]
    std::vector<std::array<double, kNumSuffixes>> rank_prop;
    std::vector<std::size_t> rank_n;
    std::vector<std::string> flagged_items;  // fewer than k finished hypotheses
    std::vector<std::uint64_t> seeds;
};

/// Class distribution of beam ranks 1..k over all (seed, stimulus) pairs.
RankProfile rank_profile(const StimulusBeams& beams, std::size_t k = 5);
RankProfile rank_profile(std::span<const seq2seq::ModelParams* const> ensemble,
                         const std::vector<WugItem>& stimuli, const corpus::Vocab& vocab,
                         std::size_t k = 5, std::size_t beam_width = seq2seq::kDefaultBeamWidth,
                         std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// Tie-corrected Spearman rank correlation: average ranks for ties, then
/// Pearson over the rank vectors. nullopt when either rank vector has zero
/// variance. Sizes must match and be >= 2.
std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Speaker data
// ---------------------------------------------------------------------------

/// One row of the speaker file: a production (produced plural string) or a
/// rating (candidate form plus 1..5 score).
struct SpeakerRecord {
    std::string participant;
    std::string item;
    bool is_rating = false;
    std::string form;
    int rating = 0;
};

/// CSV `participant,item,task,form,value` with task in {prod, rate}.
std::vector<SpeakerRecord> parse_speaker_file(const std::string& text);

struct ProductionStats {
    std::array<std::size_t, kNumSuffixes> count_r{}, count_nr{};
    std::array<double, kNumSuffixes> pct_r{}, pct_nr{};
    std::size_t n_r = 0, n_nr = 0;
};

/// Classifies each produced string against its stimulus; percentages per
/// class within rhymes and non-rhymes. Unknown items raise DataError;
/// unclassifiable strings fall into "other".
ProductionStats speaker_production_stats(const std::vector<SpeakerRecord>& records,
                                         const std::vector<WugItem>& stimuli);

struct RatingCell {
    double mean = 0.0;
    double se = 0.0;  // sd / sqrt(n), sample sd
    std::size_t n = 0;
};

struct RatingStats {
    std::array<RatingCell, kNumSuffixes> r{}, nr{};
    RatingCell overall_r, overall_nr;
};

/// Rated candidate forms classified against their stimulus; mean and
/// standard error per class per category. Ratings outside 1..5 raise
/// DataError.
RatingStats rating_stats(const std::vector<SpeakerRecord>& records,
                         const std::vector<WugItem>& stimuli);

/// Per-item speaker production proportions over the six classes.
struct SpeakerItemProps {
    std::vector<WugItem> items;
    std::vector<std::array<double, kNumSuffixes>> item_prop;
    std::vector<std::size_t> item_n;
};

SpeakerItemProps speaker_item_proportions(const std::vector<SpeakerRecord>& records,
                                          const std::vector<WugItem>& stimuli);

struct CorrelationTable {
    std::array<std::optional<double>, kNumSuffixes> rho{};
    std::size_t n_items = 0;
};

/// Spearman rho between model and speaker per-item production proportions,
/// one correlation per suffix class; classes with zero variance on either
/// side are left undefined. Item sets must match.
CorrelationTable compare_model_speaker(const WugReport& model, const SpeakerItemProps& speakers);

}  // namespace wuglab::experiments
