#include "wuglab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "wuglab/optim.hpp"

namespace wuglab::experiments {

using corpus::Vocab;
using morph::Suffix;
using numerics::AdadeltaState;
using numerics::Tensor;
using seq2seq::BeamDecoder;
using seq2seq::ModelParams;

namespace {

/// Runs fn(chunk_begin, chunk_end) for fixed-size chunks on up to `jobs`
/// threads. Chunk boundaries do not depend on the thread count, so any
/// per-chunk result slots are thread-schedule independent. Exceptions are
/// rethrown on the calling thread.
void parallel_chunks(std::size_t n, std::size_t chunk, std::size_t jobs,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    jobs = std::max<std::size_t>(1, std::min(jobs, n_chunks));

    if (jobs == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
                    fn(c, c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Suffix classify_or_other(const std::string& singular, const std::string& produced) {
    if (produced.empty()) return Suffix::OTHER;
    return morph::classify_plural(singular, produced).suffix;
}

}  // namespace

std::vector<std::uint64_t> TrainConfig::default_seeds(std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    std::iota(seeds.begin(), seeds.end(), 1);
    return seeds;
}

std::vector<Example> make_examples(const corpus::NounLexicon& lexicon,
                                   std::span<const std::size_t> indices, const Vocab& vocab) {
    std::vector<Example> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) {
        const corpus::Noun& n = lexicon.entries.at(i);
        Example ex;
        ex.lemma = n.lemma;
        ex.plural = n.plural;
        ex.gender = n.gender;
        ex.input = corpus::encode_input(n, vocab);
        ex.target = corpus::encode_target(n, vocab);
        out.push_back(std::move(ex));
    }
    return out;
}

corpus::NounLexicon subsample_lexicon(const corpus::NounLexicon& lexicon, std::size_t n,
                                      std::uint64_t seed) {
    if (n >= lexicon.entries.size()) return lexicon;
    std::vector<std::size_t> idx(lexicon.entries.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix_seed(seed, 0x5AB5));
    rng.shuffle(idx);
    corpus::NounLexicon out;
    out.provenance = lexicon.provenance;
    out.provenance.push_back("subsample:" + std::to_string(n));
    out.entries.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.entries.push_back(lexicon.entries[idx[k]]);
    return out;
}

ExperimentData prepare_data(const corpus::NounLexicon& lexicon, const TrainConfig& config,
                            const std::vector<WugItem>& stimuli) {
    const corpus::NounLexicon* lex = &lexicon;
    corpus::NounLexicon reduced;
    if (config.subsample > 0 && config.subsample < lexicon.entries.size()) {
        reduced = subsample_lexicon(lexicon, config.subsample, config.split_seed);
        lex = &reduced;
    }

    corpus::SplitCounts counts = config.splits;
    if (counts.train + counts.dev + counts.test == 0)
        counts = corpus::default_split_counts(lex->entries.size());

    ExperimentData data;
    data.splits = corpus::make_splits(*lex, counts, config.split_seed);

    std::vector<std::string> vocab_strings;
    vocab_strings.reserve(2 * data.splits.train.size() + stimuli.size());
    for (const std::size_t i : data.splits.train) {
        vocab_strings.push_back(lex->entries[i].lemma);
        vocab_strings.push_back(lex->entries[i].plural);
    }
    for (const auto& item : stimuli) vocab_strings.push_back(item.orth);
    data.vocab = Vocab::build(vocab_strings);

    data.train_set = make_examples(*lex, data.splits.train, data.vocab);
    data.dev_set = make_examples(*lex, data.splits.dev, data.vocab);
    data.test_set = make_examples(*lex, data.splits.test, data.vocab);
    return data;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

/// Gradient reduction granularity: chunk partial sums are combined in chunk
/// order, so updates are bit-identical for any worker count.
constexpr std::size_t kGradChunk = 5;

struct FlatParams {
    std::vector<Tensor*> tensors;
    static FlatParams of(ModelParams& p) {
        FlatParams f;
        p.for_each([&](const std::string&, Tensor& t) { f.tensors.push_back(&t); });
        return f;
    }
};

}  // namespace

TrainResult train(ModelParams params, const std::vector<Example>& train_set,
                  const std::vector<Example>& dev_set, const TrainConfig& config) {
    if (train_set.empty()) throw ArgumentError("train: empty training set");
    if (config.batch_size == 0 || config.epochs == 0)
        throw ArgumentError("train: batch_size and epochs must be positive");

    const bool dropout_on = params.config.dropout > 0.0;
    FlatParams flat = FlatParams::of(params);
    const std::size_t K = flat.tensors.size();

    std::vector<AdadeltaState> opt;
    opt.reserve(K);
    for (const Tensor* t : flat.tensors)
        opt.push_back(AdadeltaState::like(*t, config.adadelta_decay, config.adadelta_eps));

    TrainResult result;
    const std::size_t N = train_set.size();
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(mix_seed(params.seed, 0x5F0E), epoch));
        shuffle_rng.shuffle(order);
        double epoch_loss_sum = 0.0;

        for (std::size_t batch_begin = 0; batch_begin < N; batch_begin += config.batch_size) {
            const std::size_t batch_end = std::min(N, batch_begin + config.batch_size);
            const std::size_t B = batch_end - batch_begin;
            const std::size_t n_chunks = (B + kGradChunk - 1) / kGradChunk;

            std::vector<std::vector<Tensor>> chunk_grads(n_chunks);
            std::vector<double> chunk_loss(n_chunks, 0.0);

            try {
                parallel_chunks(B, kGradChunk, config.jobs, [&](std::size_t c, std::size_t lo, std::size_t hi) {
                    seq2seq::Tape tape;
                    const seq2seq::BoundModel bound = seq2seq::bind_model(tape, params);
                    const seq2seq::Tape::Mark mark = tape.mark();
                    for (std::size_t k = lo; k < hi; ++k) {
                        const Example& ex = train_set[order[batch_begin + k]];
                        Rng mask_rng(mix_seed(mix_seed(params.seed, 0xD0 + epoch), order[batch_begin + k]));
                        const seq2seq::Var loss = seq2seq::sequence_loss_graph(
                            tape, bound, ex.input, ex.target, dropout_on, &mask_rng);
                        chunk_loss[c] += loss.value().item();
                        tape.backward(loss, /*reset_grads=*/false);
                        tape.rewind(mark);
                    }
                    chunk_grads[c].reserve(K);
                    for (const seq2seq::Var& leaf : bound.flat) chunk_grads[c].push_back(leaf.grad());
                });
            } catch (const NumericError& e) {
                throw NumericError("training aborted at epoch " + std::to_string(epoch) + ", batch starting " +
                                   std::to_string(batch_begin) + ": " + e.what());
            }

            std::vector<Tensor> grads = std::move(chunk_grads[0]);
            for (std::size_t c = 1; c < n_chunks; ++c)
                for (std::size_t k = 0; k < K; ++k) grads[k] = numerics::add(grads[k], chunk_grads[c][k]);
            const double inv_b = 1.0 / static_cast<double>(B);
            for (Tensor& g : grads)
                for (double& x : g.values()) x *= inv_b;

            std::vector<Tensor*> grad_ptrs;
            grad_ptrs.reserve(K);
            for (Tensor& g : grads) grad_ptrs.push_back(&g);
            clip_global_norm(grad_ptrs, config.clip_norm);

            for (std::size_t k = 0; k < K; ++k) adadelta_step(*flat.tensors[k], grads[k], opt[k]);
            for (double l : chunk_loss) epoch_loss_sum += l;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss_sum / static_cast<double>(N);
        stats.dev_exact_pct =
            dev_set.empty() ? 0.0
                            : exact_accuracy(params, dev_set, config.dev_beam_width, config.jobs,
                                             config.max_len_margin);
        result.history.push_back(stats);
    }

    result.params = std::move(params);
    return result;
}

std::vector<const ModelParams*> SweepResult::ensemble() const {
    std::vector<const ModelParams*> out;
    for (const auto& o : outcomes)
        if (!o.failed) out.push_back(&o.result.params);
    return out;
}

SweepResult sweep(const ExperimentData& data, const TrainConfig& config) {
    SweepResult result;
    for (const std::uint64_t seed : config.seeds) {
        SeedOutcome outcome;
        outcome.seed = seed;
        try {
            seq2seq::ModelConfig mc = config.model;
            mc.dropout = config.dropout;
            ModelParams init = seq2seq::init_model(data.vocab, seed, mc);
            outcome.result = train(std::move(init), data.train_set, data.dev_set, config);
            if (config.eval_split_accuracy) {
                const ModelParams& trained = outcome.result.params;
                outcome.train_acc = exact_accuracy(trained, data.train_set, config.beam_width, config.jobs,
                                                   config.max_len_margin);
                outcome.dev_acc = data.dev_set.empty()
                                      ? 0.0
                                      : exact_accuracy(trained, data.dev_set, config.beam_width,
                                                       config.jobs, config.max_len_margin);
                if (!data.test_set.empty()) {
                    const SplitEval eval = evaluate_split(trained, data.test_set, data.vocab,
                                                          config.beam_width, config.jobs,
                                                          config.max_len_margin);
                    outcome.test_acc = eval.exact_pct;
                    outcome.test_prf = eval.prf;
                }
            }
        } catch (const std::exception& e) {
            outcome.failed = true;
            outcome.error = e.what();
        }
        result.outcomes.push_back(std::move(outcome));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double exact_accuracy(const ModelParams& params, const std::vector<Example>& dataset,
                      std::size_t beam_width, std::size_t jobs, std::size_t max_len_margin) {
    if (dataset.empty()) throw ArgumentError("exact_accuracy: empty dataset");
    std::vector<std::size_t> hits(dataset.size(), 0);
    parallel_chunks(dataset.size(), 16, jobs, [&](std::size_t, std::size_t lo, std::size_t hi) {
        BeamDecoder dec(params);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto hyps = dec.decode(dataset[i].input, beam_width, dataset[i].input.size() + max_len_margin);
            // token-level comparison: gold target always ends with <eos>
            hits[i] = hyps.front().tokens == dataset[i].target ? 1 : 0;
        }
    });
    const auto total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
    return 100.0 * static_cast<double>(total) / static_cast<double>(dataset.size());
}

PrfTable prf_from_pairs(std::span<const std::pair<Suffix, Suffix>> gold_pred) {
    PrfTable t;
    for (const auto& [gold, pred] : gold_pred)
        ++t.confusion[static_cast<std::size_t>(gold)][static_cast<std::size_t>(pred)];
    for (std::size_t c = 0; c < kNumSuffixes; ++c) {
        std::size_t tp = t.confusion[c][c], gold_n = 0, pred_n = 0;
        for (std::size_t k = 0; k < kNumSuffixes; ++k) {
            gold_n += t.confusion[c][k];
            pred_n += t.confusion[k][c];
        }
        PrfRow& row = t.rows[c];
        row.gold_count = gold_n;
        row.predicted_count = pred_n;
        row.precision = pred_n ? static_cast<double>(tp) / static_cast<double>(pred_n) : 0.0;
        row.recall = gold_n ? static_cast<double>(tp) / static_cast<double>(gold_n) : 0.0;
        row.f1 = row.precision + row.recall > 0.0
                     ? 2.0 * row.precision * row.recall / (row.precision + row.recall)
                     : 0.0;
    }
    return t;
}

PrfTable suffix_prf(const ModelParams& params, const std::vector<Example>& dataset, const Vocab& vocab,
                    std::size_t beam_width, std::size_t jobs, std::size_t max_len_margin) {
    if (dataset.empty()) throw ArgumentError("suffix_prf: empty dataset");
    std::vector<std::pair<Suffix, Suffix>> pairs(dataset.size());
    parallel_chunks(dataset.size(), 16, jobs, [&](std::size_t, std::size_t lo, std::size_t hi) {
        BeamDecoder dec(params);
        for (std::size_t i = lo; i < hi; ++i) {
            const Example& ex = dataset[i];
            const auto hyps = dec.decode(ex.input, beam_width, ex.input.size() + max_len_margin);
            const std::string predicted = corpus::decode_tokens(hyps.front().tokens, vocab);
            pairs[i] = {classify_or_other(ex.lemma, ex.plural), classify_or_other(ex.lemma, predicted)};
        }
    });
    return prf_from_pairs(pairs);
}

// ---------------------------------------------------------------------------
// Wug productions and rank profiles
// ---------------------------------------------------------------------------

StimulusBeams decode_stimuli(std::span<const ModelParams* const> ensemble,
                             const std::vector<WugItem>& stimuli, const Vocab& vocab,
                             std::size_t beam_width, std::size_t jobs, std::size_t max_len_margin) {
    if (ensemble.empty()) throw ArgumentError("decode_stimuli: empty ensemble");
    if (stimuli.empty()) throw ArgumentError("decode_stimuli: no stimuli");

    StimulusBeams bank;
    bank.items = stimuli;
    for (const ModelParams* p : ensemble) bank.seeds.push_back(p->seed);
    bank.outputs.assign(ensemble.size(), std::vector<std::vector<DecodedForm>>(stimuli.size()));

    std::vector<TokenSeq> inputs;
    inputs.reserve(stimuli.size());
    for (const auto& item : stimuli)
        inputs.push_back(corpus::encode_input(item.orth, corpus::Gender::N, vocab));

    const std::size_t total = ensemble.size() * stimuli.size();
    parallel_chunks(total, stimuli.size(), jobs, [&](std::size_t, std::size_t lo, std::size_t hi) {
        std::size_t current_seed = lo / stimuli.size();
        BeamDecoder dec(*ensemble[current_seed]);
        for (std::size_t flat = lo; flat < hi; ++flat) {
            const std::size_t s = flat / stimuli.size(), i = flat % stimuli.size();
            if (s != current_seed) break;  // chunk == one seed's items by construction
            const auto hyps = dec.decode(inputs[i], beam_width, inputs[i].size() + max_len_margin);
            auto& slot = bank.outputs[s][i];
            slot.reserve(hyps.size());
            for (const auto& h : hyps)
                slot.push_back(DecodedForm{corpus::decode_tokens(h.tokens, vocab), h.log_prob, h.finished});
        }
    });
    return bank;
}

WugReport wug_productions(const StimulusBeams& beams) {
    WugReport report;
    report.items = beams.items;
    report.seeds = beams.seeds;
    report.item_prop.assign(beams.items.size(), {});

    const std::size_t n_seeds = beams.seeds.size();
    std::vector<std::array<std::size_t, kNumSuffixes>> item_count(beams.items.size());
    for (auto& a : item_count) a.fill(0);

    for (std::size_t s = 0; s < n_seeds; ++s) {
        for (std::size_t i = 0; i < beams.items.size(); ++i) {
            const auto& forms = beams.outputs[s][i];
            if (forms.empty()) throw DataError("wug_productions: empty beam for " + beams.items[i].orth);
            const Suffix cls = classify_or_other(beams.items[i].orth, forms.front().form);
            ++item_count[i][static_cast<std::size_t>(cls)];
        }
    }

    for (std::size_t i = 0; i < beams.items.size(); ++i) {
        auto& agg = beams.items[i].rhyme ? report.rhyme_count : report.nonrhyme_count;
        auto& n = beams.items[i].rhyme ? report.n_rhyme : report.n_nonrhyme;
        for (std::size_t c = 0; c < kNumSuffixes; ++c) {
            report.item_prop[i][c] =
                static_cast<double>(item_count[i][c]) / static_cast<double>(n_seeds);
            agg[c] += item_count[i][c];
        }
        n += n_seeds;
    }
    for (std::size_t c = 0; c < kNumSuffixes; ++c) {
        if (report.n_rhyme)
            report.rhyme_pct[c] = 100.0 * static_cast<double>(report.rhyme_count[c]) /
                                  static_cast<double>(report.n_rhyme);
        if (report.n_nonrhyme)
            report.nonrhyme_pct[c] = 100.0 * static_cast<double>(report.nonrhyme_count[c]) /
                                     static_cast<double>(report.n_nonrhyme);
    }
    return report;
}

WugReport wug_productions(std::span<const ModelParams* const> ensemble, const std::vector<WugItem>& stimuli,
                          const Vocab& vocab, std::size_t beam_width, std::size_t jobs) {
    return wug_productions(decode_stimuli(ensemble, stimuli, vocab, beam_width, jobs));
}

RankProfile rank_profile(const StimulusBeams& beams, std::size_t k) {
    if (k == 0) throw ArgumentError("rank_profile: k must be >= 1");
    RankProfile profile;
    profile.k = k;
    profile.seeds = beams.seeds;
    profile.rank_count.assign(k, {});
    profile.rank_prop.assign(k, {});
    profile.rank_n.assign(k, 0);

    for (std::size_t s = 0; s < beams.seeds.size(); ++s) {
        for (std::size_t i = 0; i < beams.items.size(); ++i) {
            const auto& forms = beams.outputs[s][i];
            std::size_t finished = 0;
            for (const auto& f : forms) finished += f.finished ? 1 : 0;
            if (finished < k) {
                const std::string& orth = beams.items[i].orth;
                if (std::find(profile.flagged_items.begin(), profile.flagged_items.end(), orth) ==
                    profile.flagged_items.end())
                    profile.flagged_items.push_back(orth);
            }
            for (std::size_t r = 0; r < std::min(k, forms.size()); ++r) {
                const Suffix cls = classify_or_other(beams.items[i].orth, forms[r].form);
                ++profile.rank_count[r][static_cast<std::size_t>(cls)];
                ++profile.rank_n[r];
            }
        }
    }
    for (std::size_t r = 0; r < k; ++r)
        if (profile.rank_n[r])
            for (std::size_t c = 0; c < kNumSuffixes; ++c)
                profile.rank_prop[r][c] = static_cast<double>(profile.rank_count[r][c]) /
                                          static_cast<double>(profile.rank_n[r]);
    return profile;
}

RankProfile rank_profile(std::span<const ModelParams* const> ensemble, const std::vector<WugItem>& stimuli,
                         const Vocab& vocab, std::size_t k, std::size_t beam_width, std::size_t jobs) {
    return rank_profile(decode_stimuli(ensemble, stimuli, vocab, beam_width, jobs), k);
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;  // 1-based
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("spearman_rho: size mismatch");
    if (x.size() < 2) throw ArgumentError("spearman_rho: need at least 2 observations");

    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;  // zero rank variance
    return sxy / std::sqrt(sxx * syy);
}

CorrelationTable compare_model_speaker(const WugReport& model, const SpeakerItemProps& speakers) {
    if (model.items.size() != speakers.items.size())
        throw ArgumentError("compare_model_speaker: item sets differ in size");

    std::vector<std::size_t> align(model.items.size());
    for (std::size_t i = 0; i < model.items.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < speakers.items.size(); ++j) {
            if (speakers.items[j].orth == model.items[i].orth) {
                align[i] = j;
                found = true;
                break;
            }
        }
        if (!found)
            throw ArgumentError("compare_model_speaker: item missing from speaker data: " +
                                model.items[i].orth);
    }

    CorrelationTable table;
    table.n_items = model.items.size();
    for (std::size_t c = 0; c < kNumSuffixes; ++c) {
        std::vector<double> x, y;
        x.reserve(model.items.size());
        y.reserve(model.items.size());
        for (std::size_t i = 0; i < model.items.size(); ++i) {
            x.push_back(model.item_prop[i][c]);
            y.push_back(speakers.item_prop[align[i]][c]);
        }
        table.rho[c] = spearman_rho(x, y);
    }
    return table;
}

}  // namespace wuglab::experiments
