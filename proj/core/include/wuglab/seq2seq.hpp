#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wuglab/corpus.hpp"
#include "wuglab/tape.hpp"
#include "wuglab/tensor.hpp"

namespace wuglab::seq2seq {

using corpus::TokenSeq;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

enum class AttentionKind : std::uint8_t { Bilinear, Additive };

struct ModelConfig {
    std::size_t embed_dim = 300;
    std::size_t hidden_dim = 100;
    std::size_t layers = 2;
    AttentionKind attention = AttentionKind::Bilinear;
    bool bidirectional = false;  // sum-merged when enabled
    double dropout = 0.3;        // between recurrent layers, training only

    std::string to_string() const;
    static ModelConfig parse(const std::string& s);
};

/// One stacked recurrent layer; gate order is input, forget, cell, output.
struct LstmLayerParams {
    Tensor w_in[4];   // [hidden x in_dim]
    Tensor w_rec[4];  // [hidden x hidden]
    Tensor bias[4];   // [hidden]
};

/// All trainable weights plus the seed they were drawn from.
struct ModelParams {
    ModelConfig config;
    std::uint64_t seed = 0;

    Tensor enc_embedding;  // [V x embed]
    std::vector<LstmLayerParams> enc_layers;
    std::vector<LstmLayerParams> enc_layers_rev;  // bidirectional only
    Tensor dec_embedding;
    std::vector<LstmLayerParams> dec_layers;
    Tensor attn_bilinear;                      // [hidden x hidden]
    Tensor attn_dec, attn_enc, attn_score;     // additive variant
    Tensor out_w;  // [V x 2*hidden]
    Tensor out_b;  // [V]

    std::size_t vocab_size() const { return enc_embedding.rows(); }
    std::size_t param_count() const;

    /// Visits every tensor in a fixed order; this order defines checkpoint
    /// layout, leaf binding and initialization streams.
    void for_each(const std::function<void(const std::string&, Tensor&)>& fn);
    void for_each(const std::function<void(const std::string&, const Tensor&)>& fn) const;
    std::vector<std::pair<std::string, const Tensor*>> named() const;
};

/// Weights drawn uniform(-0.1, 0.1) from a generator seeded with `seed`;
/// identical seed gives identical parameters.
ModelParams init_model(std::size_t vocab_size, std::uint64_t seed, ModelConfig config = {});
ModelParams init_model(const corpus::Vocab& vocab, std::uint64_t seed, ModelConfig config = {});

/// Checkpoint + sidecar metadata (seed, vocab hash, config, free-form keys).
void save_model(const ModelParams& params, const std::string& ckpt_path, const std::string& meta_path,
                const std::map<std::string, std::string>& extra_meta = {});
ModelParams load_model(const std::string& ckpt_path, const std::string& meta_path);

// ---------------------------------------------------------------------------
// Evaluation-mode forward results (plain tensors)
// ---------------------------------------------------------------------------

struct EncStates {
    Tensor top;                   // [T x hidden], top-layer state per input position
    std::vector<Tensor> final_h;  // per layer
    std::vector<Tensor> final_c;
};

struct DecState {
    std::vector<Tensor> h;
    std::vector<Tensor> c;
};

/// Layer-wise copy of the encoder final states.
DecState initial_dec_state(const EncStates& enc);

EncStates encode(const ModelParams& params, const TokenSeq& input);

/// Bilinear (or additive) global attention over top-layer encoder states:
/// returns (context, weights).
std::pair<Tensor, Tensor> attend(const ModelParams& params, const Tensor& dec_hidden, const EncStates& enc);

/// Embeds prev_token, runs the decoder stack, attends, projects
/// [hidden; context] to vocabulary logits.
std::pair<Tensor, DecState> decode_step(const ModelParams& params, std::int32_t prev_token,
                                        const DecState& state, const EncStates& enc);

/// Teacher-forced mean per-token negative log-likelihood. target must end
/// with <eos>. Dropout masks come from `rng` (required when dropout_on).
double sequence_loss(const ModelParams& params, const TokenSeq& input, const TokenSeq& target,
                     bool dropout_on, Rng* rng = nullptr);

// ---------------------------------------------------------------------------
// Beam search
// ---------------------------------------------------------------------------

struct BeamHypothesis {
    TokenSeq tokens;        // decoder output, includes the final <eos> when finished
    double log_prob = 0.0;  // length-unnormalized sum of token log-probabilities
    bool finished = false;  // last token is <eos>
};

constexpr std::size_t kDefaultBeamWidth = 12;

/// Length-unnormalized beam search. Returns up to beam_width hypotheses
/// sorted by log-probability descending, ties broken by token-index
/// lexicographic order. Hypotheses still open at max_len are returned
/// as-is with finished = false. max_len = 0 means input length + 5.
std::vector<BeamHypothesis> beam_search(const ModelParams& params, const TokenSeq& input,
                                        std::size_t beam_width = kDefaultBeamWidth,
                                        std::size_t max_len = 0);

/// Reusable single-thread decoder: parameters are bound to an internal tape
/// once, then reused across inputs. Same results as beam_search().
class BeamDecoder {
  public:
    explicit BeamDecoder(const ModelParams& params);
    ~BeamDecoder();
    BeamDecoder(const BeamDecoder&) = delete;
    BeamDecoder& operator=(const BeamDecoder&) = delete;

    std::vector<BeamHypothesis> decode(const TokenSeq& input, std::size_t beam_width = kDefaultBeamWidth,
                                       std::size_t max_len = 0);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Tape-level graph building (training, gradient checking)
// ---------------------------------------------------------------------------

struct BoundLstmLayer {
    Var w_in[4], w_rec[4], bias[4];
};

/// Model parameters bound as leaves (or supplied Vars) on a tape.
struct BoundModel {
    ModelConfig config;
    std::size_t vocab = 0;
    Var enc_embedding;
    std::vector<BoundLstmLayer> enc_layers, enc_layers_rev;
    Var dec_embedding;
    std::vector<BoundLstmLayer> dec_layers;
    Var attn_bilinear, attn_dec, attn_enc, attn_score;
    Var out_w, out_b;
    Var ones_hidden_col;     // constant [hidden x 1], used by additive scoring
    std::vector<Var> flat;   // for_each order
};

/// Copies parameter values onto the tape as leaves.
BoundModel bind_model(Tape& tape, const ModelParams& params);
/// Rebinds externally created leaves (for_each order); used by grad_check.
BoundModel structure_leaves(Tape& tape, const ModelParams& like, const std::vector<Var>& leaves);
/// Parameter values in for_each order.
std::vector<Tensor> flat_values(const ModelParams& params);

struct EncGraph {
    std::vector<Var> top;  // per position [hidden]
    Var top_matrix;        // [T x hidden]
    std::vector<Var> final_h, final_c;
};

EncGraph encode_graph(Tape& tape, const BoundModel& m, const TokenSeq& input, bool dropout_on = false,
                      Rng* rng = nullptr);

std::pair<Var, Var> attend_graph(Tape& tape, const BoundModel& m, Var dec_hidden, const EncGraph& enc);

struct DecGraphState {
    std::vector<Var> h, c;
};

DecGraphState initial_dec_graph_state(const EncGraph& enc);

std::pair<Var, DecGraphState> decode_step_graph(Tape& tape, const BoundModel& m, std::int32_t prev_token,
                                                const DecGraphState& state, const EncGraph& enc,
                                                bool dropout_on = false, Rng* rng = nullptr);

/// Scalar teacher-forced mean NLL on the tape.
Var sequence_loss_graph(Tape& tape, const BoundModel& m, const TokenSeq& input, const TokenSeq& target,
                        bool dropout_on = false, Rng* rng = nullptr);

}  // namespace wuglab::seq2seq
