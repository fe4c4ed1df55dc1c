#include "wuglab/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wuglab/checkpoint.hpp"

namespace wuglab::seq2seq {

using corpus::Vocab;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

std::string ModelConfig::to_string() const {
    std::ostringstream ss;
    ss << "embed=" << embed_dim << ";hidden=" << hidden_dim << ";layers=" << layers
       << ";attention=" << (attention == AttentionKind::Bilinear ? "bilinear" : "additive")
       << ";bidirectional=" << (bidirectional ? 1 : 0) << ";dropout=" << dropout;
    return ss.str();
}

ModelConfig ModelConfig::parse(const std::string& s) {
    ModelConfig cfg;
    for (const auto& kvs : split(s, ';')) {
        const auto eq = kvs.find('=');
        if (eq == std::string::npos) throw ParseError("bad model config field: " + kvs);
        const std::string k = kvs.substr(0, eq), v = kvs.substr(eq + 1);
        if (k == "embed")
            cfg.embed_dim = std::stoul(v);
        else if (k == "hidden")
            cfg.hidden_dim = std::stoul(v);
        else if (k == "layers")
            cfg.layers = std::stoul(v);
        else if (k == "attention")
            cfg.attention = v == "additive" ? AttentionKind::Additive : AttentionKind::Bilinear;
        else if (k == "bidirectional")
            cfg.bidirectional = v == "1";
        else if (k == "dropout")
            cfg.dropout = std::stod(v);
        else
            throw ParseError("unknown model config key: " + k);
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

namespace {

const char* kGateNames[4] = {"i", "f", "g", "o"};

void for_each_layer(const std::string& prefix, std::vector<LstmLayerParams>& layers,
                    const std::function<void(const std::string&, Tensor&)>& fn) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string lp = prefix + ".l" + std::to_string(l) + ".";
        for (int g = 0; g < 4; ++g) fn(lp + "wi." + kGateNames[g], layers[l].w_in[g]);
        for (int g = 0; g < 4; ++g) fn(lp + "wr." + kGateNames[g], layers[l].w_rec[g]);
        for (int g = 0; g < 4; ++g) fn(lp + "b." + kGateNames[g], layers[l].bias[g]);
    }
}

}  // namespace

void ModelParams::for_each(const std::function<void(const std::string&, Tensor&)>& fn) {
    fn("enc_embedding", enc_embedding);
    for_each_layer("enc", enc_layers, fn);
    if (config.bidirectional) for_each_layer("enc_rev", enc_layers_rev, fn);
    fn("dec_embedding", dec_embedding);
    for_each_layer("dec", dec_layers, fn);
    if (config.attention == AttentionKind::Bilinear) {
        fn("attn.w", attn_bilinear);
    } else {
        fn("attn.dec", attn_dec);
        fn("attn.enc", attn_enc);
        fn("attn.score", attn_score);
    }
    fn("out.w", out_w);
    fn("out.b", out_b);
}

void ModelParams::for_each(const std::function<void(const std::string&, const Tensor&)>& fn) const {
    auto* self = const_cast<ModelParams*>(this);
    self->for_each([&](const std::string& name, Tensor& t) { fn(name, t); });
}

std::size_t ModelParams::param_count() const {
    std::size_t n = 0;
    for_each([&](const std::string&, const Tensor& t) { n += t.size(); });
    return n;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named() const {
    std::vector<std::pair<std::string, const Tensor*>> out;
    for_each([&](const std::string& name, const Tensor& t) { out.emplace_back(name, &t); });
    return out;
}

namespace {

std::vector<LstmLayerParams> make_layers(std::size_t n_layers, std::size_t in_dim, std::size_t hidden) {
    std::vector<LstmLayerParams> layers(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in = l == 0 ? in_dim : hidden;
        for (int g = 0; g < 4; ++g) {
            layers[l].w_in[g] = Tensor({hidden, in});
            layers[l].w_rec[g] = Tensor({hidden, hidden});
            layers[l].bias[g] = Tensor({hidden});
        }
    }
    return layers;
}

}  // namespace

ModelParams init_model(std::size_t vocab_size, std::uint64_t seed, ModelConfig config) {
    if (vocab_size == 0) throw ArgumentError("init_model: empty vocabulary");
    if (config.layers == 0) throw ArgumentError("init_model: need at least one layer");

    ModelParams p;
    p.config = config;
    p.seed = seed;
    const std::size_t H = config.hidden_dim, E = config.embed_dim, V = vocab_size;

    p.enc_embedding = Tensor({V, E});
    p.enc_layers = make_layers(config.layers, E, H);
    if (config.bidirectional) p.enc_layers_rev = make_layers(config.layers, E, H);
    p.dec_embedding = Tensor({V, E});
    p.dec_layers = make_layers(config.layers, E, H);
    if (config.attention == AttentionKind::Bilinear) {
        p.attn_bilinear = Tensor({H, H});
    } else {
        p.attn_dec = Tensor({H, H});
        p.attn_enc = Tensor({H, H});
        p.attn_score = Tensor({H});
    }
    p.out_w = Tensor({V, 2 * H});
    p.out_b = Tensor({V});

    Rng rng(seed);
    p.for_each([&](const std::string&, Tensor& t) {
        for (double& x : t.values()) x = rng.next_uniform(-0.1, 0.1);
    });
    return p;
}

ModelParams init_model(const Vocab& vocab, std::uint64_t seed, ModelConfig config) {
    return init_model(vocab.size(), seed, config);
}

void save_model(const ModelParams& params, const std::string& ckpt_path, const std::string& meta_path,
                const std::map<std::string, std::string>& extra_meta) {
    numerics::save_checkpoint(ckpt_path, params.named());
    std::map<std::string, std::string> meta = extra_meta;
    meta["seed"] = std::to_string(params.seed);
    meta["config"] = params.config.to_string();
    numerics::save_metadata(meta_path, meta);
}

ModelParams load_model(const std::string& ckpt_path, const std::string& meta_path) {
    const auto meta = numerics::load_metadata(meta_path);
    const auto cfg_it = meta.find("config");
    const auto seed_it = meta.find("seed");
    if (cfg_it == meta.end() || seed_it == meta.end())
        throw DataError("model metadata missing config/seed: " + meta_path);

    const auto entries = load_checkpoint(ckpt_path);
    std::size_t vocab = 0;
    for (const auto& [name, t] : entries)
        if (name == "enc_embedding") vocab = t.rows();
    if (vocab == 0) throw DataError("checkpoint has no enc_embedding: " + ckpt_path);

    ModelParams p = init_model(vocab, std::stoull(seed_it->second), ModelConfig::parse(cfg_it->second));
    std::size_t matched = 0;
    p.for_each([&](const std::string& name, Tensor& t) {
        for (const auto& [ename, et] : entries) {
            if (ename != name) continue;
            if (!t.same_shape(et))
                throw DataError("checkpoint tensor " + name + " has shape " + et.shape_str() + ", expected " +
                                t.shape_str());
            t = et;
            ++matched;
            return;
        }
        throw DataError("checkpoint missing tensor: " + name);
    });
    if (matched != entries.size())
        throw DataError("checkpoint has " + std::to_string(entries.size() - matched) + " unexpected tensors");
    return p;
}

// ---------------------------------------------------------------------------
// Graph building
// ---------------------------------------------------------------------------

namespace {

BoundLstmLayer bind_layer_from(std::vector<Var>::const_iterator& it) {
    BoundLstmLayer b;
    for (int g = 0; g < 4; ++g) b.w_in[g] = *it++;
    for (int g = 0; g < 4; ++g) b.w_rec[g] = *it++;
    for (int g = 0; g < 4; ++g) b.bias[g] = *it++;
    return b;
}

/// Bernoulli keep-mask with inverted scaling; evaluation mode is identity.
Var dropout_mask(Tape& tape, std::size_t n, double rate, Rng& rng) {
    Tensor mask({n});
    const double keep = 1.0 - rate;
    for (std::size_t i = 0; i < n; ++i) mask[i] = rng.next_uniform() < keep ? 1.0 / keep : 0.0;
    return tape.constant(std::move(mask));
}

std::pair<Var, Var> lstm_cell(Tape& t, const BoundLstmLayer& L, Var x, Var h, Var c) {
    const auto gate = [&](int g) {
        return t.add(t.add(t.matmul(L.w_in[g], x), t.matmul(L.w_rec[g], h)), L.bias[g]);
    };
    const Var i = t.sigmoid(gate(0));
    const Var f = t.sigmoid(gate(1));
    const Var g_ = t.tanh(gate(2));
    const Var o = t.sigmoid(gate(3));
    const Var c_new = t.add(t.mul(f, c), t.mul(i, g_));
    const Var h_new = t.mul(o, t.tanh(c_new));
    return {h_new, c_new};
}

/// Runs one stacked-LSTM pass over embedded tokens; returns per-position
/// top-layer states and final (h, c) per layer.
struct StackRun {
    std::vector<Var> top;
    std::vector<Var> final_h, final_c;
};

StackRun run_stack(Tape& tape, const BoundModel& m, const std::vector<BoundLstmLayer>& layers, Var embedding,
                   const TokenSeq& tokens, bool dropout_on, Rng* rng) {
    const std::size_t H = m.config.hidden_dim;
    const std::size_t L = layers.size();
    std::vector<Var> h(L), c(L);
    for (std::size_t l = 0; l < L; ++l) {
        h[l] = tape.constant(Tensor({H}));
        c[l] = tape.constant(Tensor({H}));
    }
    StackRun run;
    run.top.reserve(tokens.size());
    for (const std::int32_t tok : tokens) {
        Var x = tape.lookup(embedding, tok);
        for (std::size_t l = 0; l < L; ++l) {
            if (l > 0 && dropout_on && m.config.dropout > 0.0)
                x = tape.mul(x, dropout_mask(tape, H, m.config.dropout, *rng));
            auto [hn, cn] = lstm_cell(tape, layers[l], x, h[l], c[l]);
            h[l] = hn;
            c[l] = cn;
            x = hn;
        }
        run.top.push_back(h[L - 1]);
    }
    run.final_h = h;
    run.final_c = c;
    return run;
}

}  // namespace

BoundModel structure_leaves(Tape& tape, const ModelParams& like, const std::vector<Var>& leaves) {
    if (leaves.size() != like.named().size())
        throw ArgumentError("structure_leaves: expected " + std::to_string(like.named().size()) +
                            " leaves, got " + std::to_string(leaves.size()));
    BoundModel m;
    m.config = like.config;
    m.vocab = like.vocab_size();
    m.flat = leaves;
    auto it = leaves.cbegin();
    m.enc_embedding = *it++;
    for (std::size_t l = 0; l < like.enc_layers.size(); ++l) m.enc_layers.push_back(bind_layer_from(it));
    if (like.config.bidirectional)
        for (std::size_t l = 0; l < like.enc_layers_rev.size(); ++l)
            m.enc_layers_rev.push_back(bind_layer_from(it));
    m.dec_embedding = *it++;
    for (std::size_t l = 0; l < like.dec_layers.size(); ++l) m.dec_layers.push_back(bind_layer_from(it));
    if (like.config.attention == AttentionKind::Bilinear) {
        m.attn_bilinear = *it++;
    } else {
        m.attn_dec = *it++;
        m.attn_enc = *it++;
        m.attn_score = *it++;
    }
    m.out_w = *it++;
    m.out_b = *it++;
    m.ones_hidden_col = tape.constant(Tensor({like.config.hidden_dim, 1}, 1.0));
    return m;
}

BoundModel bind_model(Tape& tape, const ModelParams& params) {
    std::vector<Var> leaves;
    params.for_each([&](const std::string&, const Tensor& t) { leaves.push_back(tape.leaf(t)); });
    return structure_leaves(tape, params, leaves);
}

std::vector<Tensor> flat_values(const ModelParams& params) {
    std::vector<Tensor> out;
    params.for_each([&](const std::string&, const Tensor& t) { out.push_back(t); });
    return out;
}

EncGraph encode_graph(Tape& tape, const BoundModel& m, const TokenSeq& input, bool dropout_on, Rng* rng) {
    if (input.empty()) throw ArgumentError("encode: empty input sequence");
    for (const std::int32_t tok : input)
        if (tok < 0 || static_cast<std::size_t>(tok) >= m.vocab)
            throw ArgumentError("encode: token id " + std::to_string(tok) + " outside vocabulary");
    if (dropout_on && rng == nullptr) throw ArgumentError("dropout requires an RNG stream");

    EncGraph enc;
    StackRun fwd = run_stack(tape, m, m.enc_layers, m.enc_embedding, input, dropout_on, rng);
    if (!m.config.bidirectional) {
        enc.top = std::move(fwd.top);
        enc.final_h = std::move(fwd.final_h);
        enc.final_c = std::move(fwd.final_c);
    } else {
        TokenSeq reversed(input.rbegin(), input.rend());
        StackRun bwd = run_stack(tape, m, m.enc_layers_rev, m.enc_embedding, reversed, dropout_on, rng);
        const std::size_t T = input.size();
        enc.top.resize(T);
        for (std::size_t t = 0; t < T; ++t)
            enc.top[t] = tape.add(fwd.top[t], bwd.top[T - 1 - t]);  // sum merge
        for (std::size_t l = 0; l < fwd.final_h.size(); ++l) {
            enc.final_h.push_back(tape.add(fwd.final_h[l], bwd.final_h[l]));
            enc.final_c.push_back(tape.add(fwd.final_c[l], bwd.final_c[l]));
        }
    }
    enc.top_matrix = tape.stack_rows(enc.top);
    return enc;
}

namespace {

Var dot(Tape& tape, const BoundModel& m, Var a, Var b) {
    return tape.matmul(tape.mul(a, b), m.ones_hidden_col);  // [H]x[Hx1] -> [1]
}

}  // namespace

std::pair<Var, Var> attend_graph(Tape& tape, const BoundModel& m, Var dec_hidden, const EncGraph& enc) {
    Var scores{};
    if (m.config.attention == AttentionKind::Bilinear) {
        const Var key = tape.matmul(m.attn_bilinear, dec_hidden);       // [H]
        scores = tape.matmul(enc.top_matrix, key);                      // [T]
    } else {
        const Var query = tape.matmul(m.attn_dec, dec_hidden);
        std::vector<Var> per_pos;
        per_pos.reserve(enc.top.size());
        for (const Var& e : enc.top) {
            const Var hidden = tape.tanh(tape.add(query, tape.matmul(m.attn_enc, e)));
            per_pos.push_back(dot(tape, m, m.attn_score, hidden));
        }
        scores = per_pos.front();
        for (std::size_t t = 1; t < per_pos.size(); ++t) scores = tape.concat(scores, per_pos[t]);
    }
    const Var weights = tape.softmax(scores);
    const Var context = tape.matmul(weights, enc.top_matrix);  // [T]x[TxH] -> [H]
    return {context, weights};
}

DecGraphState initial_dec_graph_state(const EncGraph& enc) {
    return DecGraphState{enc.final_h, enc.final_c};
}

std::pair<Var, DecGraphState> decode_step_graph(Tape& tape, const BoundModel& m, std::int32_t prev_token,
                                                const DecGraphState& state, const EncGraph& enc,
                                                bool dropout_on, Rng* rng) {
    if (prev_token < 0 || static_cast<std::size_t>(prev_token) >= m.vocab)
        throw ArgumentError("decode_step: token id outside vocabulary");
    if (dropout_on && rng == nullptr) throw ArgumentError("dropout requires an RNG stream");

    const std::size_t H = m.config.hidden_dim;
    DecGraphState next = state;
    Var x = tape.lookup(m.dec_embedding, prev_token);
    for (std::size_t l = 0; l < m.dec_layers.size(); ++l) {
        if (l > 0 && dropout_on && m.config.dropout > 0.0)
            x = tape.mul(x, dropout_mask(tape, H, m.config.dropout, *rng));
        auto [hn, cn] = lstm_cell(tape, m.dec_layers[l], x, next.h[l], next.c[l]);
        next.h[l] = hn;
        next.c[l] = cn;
        x = hn;
    }
    auto [context, weights] = attend_graph(tape, m, next.h.back(), enc);
    (void)weights;
    const Var logits = tape.add(tape.matmul(m.out_w, tape.concat(next.h.back(), context)), m.out_b);
    return {logits, next};
}

Var sequence_loss_graph(Tape& tape, const BoundModel& m, const TokenSeq& input, const TokenSeq& target,
                        bool dropout_on, Rng* rng) {
    if (target.empty() || target.back() != Vocab::kEos)
        throw ArgumentError("sequence_loss: target must end with <eos>");

    const EncGraph enc = encode_graph(tape, m, input, dropout_on, rng);
    DecGraphState state = initial_dec_graph_state(enc);
    std::vector<Var> probs;
    probs.reserve(target.size());
    std::int32_t prev = Vocab::kBos;
    for (const std::int32_t gold : target) {
        auto [logits, next] = decode_step_graph(tape, m, prev, state, enc, dropout_on, rng);
        probs.push_back(tape.softmax(logits));
        state = next;
        prev = gold;  // teacher forcing
    }
    return tape.nll_mean(probs, target);
}

// ---------------------------------------------------------------------------
// Evaluation-mode wrappers (plain tensors in and out)
// ---------------------------------------------------------------------------

DecState initial_dec_state(const EncStates& enc) { return DecState{enc.final_h, enc.final_c}; }

EncStates encode(const ModelParams& params, const TokenSeq& input) {
    Tape tape;
    const BoundModel m = bind_model(tape, params);
    const EncGraph g = encode_graph(tape, m, input);
    EncStates out;
    out.top = g.top_matrix.value();
    for (const Var& v : g.final_h) out.final_h.push_back(v.value());
    for (const Var& v : g.final_c) out.final_c.push_back(v.value());
    return out;
}

namespace {

/// Rebuilds tape Vars for plain-tensor encoder states.
EncGraph enc_constants(Tape& tape, const EncStates& enc) {
    EncGraph g;
    const std::size_t T = enc.top.rows(), H = enc.top.cols();
    for (std::size_t t = 0; t < T; ++t) {
        Tensor row({H});
        for (std::size_t i = 0; i < H; ++i) row[i] = enc.top.at(t, i);
        g.top.push_back(tape.constant(std::move(row)));
    }
    g.top_matrix = tape.stack_rows(g.top);
    for (const Tensor& h : enc.final_h) g.final_h.push_back(tape.constant(h));
    for (const Tensor& c : enc.final_c) g.final_c.push_back(tape.constant(c));
    return g;
}

}  // namespace

std::pair<Tensor, Tensor> attend(const ModelParams& params, const Tensor& dec_hidden, const EncStates& enc) {
    if (dec_hidden.rank() != 1 || dec_hidden.size() != params.config.hidden_dim)
        throw ShapeError("attend: decoder state has shape " + dec_hidden.shape_str());
    if (enc.top.rank() != 2 || enc.top.cols() != params.config.hidden_dim)
        throw ShapeError("attend: encoder states have shape " + enc.top.shape_str());
    Tape tape;
    const BoundModel m = bind_model(tape, params);
    const EncGraph g = enc_constants(tape, enc);
    const Var h = tape.constant(dec_hidden);
    auto [context, weights] = attend_graph(tape, m, h, g);
    return {context.value(), weights.value()};
}

std::pair<Tensor, DecState> decode_step(const ModelParams& params, std::int32_t prev_token,
                                        const DecState& state, const EncStates& enc) {
    Tape tape;
    const BoundModel m = bind_model(tape, params);
    const EncGraph g = enc_constants(tape, enc);
    DecGraphState s;
    for (const Tensor& h : state.h) s.h.push_back(tape.constant(h));
    for (const Tensor& c : state.c) s.c.push_back(tape.constant(c));
    auto [logits, next] = decode_step_graph(tape, m, prev_token, s, g);
    DecState out;
    for (const Var& h : next.h) out.h.push_back(h.value());
    for (const Var& c : next.c) out.c.push_back(c.value());
    return {logits.value(), out};
}

double sequence_loss(const ModelParams& params, const TokenSeq& input, const TokenSeq& target,
                     bool dropout_on, Rng* rng) {
    Tape tape;
    const BoundModel m = bind_model(tape, params);
    return sequence_loss_graph(tape, m, input, target, dropout_on, rng).value().item();
}

// ---------------------------------------------------------------------------
// Beam search
// ---------------------------------------------------------------------------

namespace {

/// log softmax of logits, computed on plain values.
std::vector<double> log_softmax(const Tensor& logits) {
    double mx = logits[0];
    for (std::size_t i = 1; i < logits.size(); ++i) mx = std::max(mx, logits[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) total += std::exp(logits[i] - mx);
    const double lz = mx + std::log(total);
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lz;
    return out;
}

struct LiveHyp {
    TokenSeq tokens;
    double log_prob = 0.0;
    DecGraphState state;
};

bool hyp_before(const TokenSeq& at, double alp, const TokenSeq& bt, double blp) {
    if (alp != blp) return alp > blp;
    return std::lexicographical_compare(at.begin(), at.end(), bt.begin(), bt.end());
}

}  // namespace

struct BeamDecoder::Impl {
    Tape tape;
    BoundModel bound;
    Tape::Mark base;

    explicit Impl(const ModelParams& params) : bound(bind_model(tape, params)) { base = tape.mark(); }

    std::vector<BeamHypothesis> decode(const TokenSeq& input, std::size_t beam_width, std::size_t max_len) {
        if (beam_width < 1) throw ArgumentError("beam_search: beam_width must be >= 1");
        if (max_len == 0) max_len = input.size() + 5;

        tape.rewind(base);
        const EncGraph enc = encode_graph(tape, bound, input);

        std::vector<LiveHyp> live;
        live.push_back(LiveHyp{{}, 0.0, initial_dec_graph_state(enc)});
        std::vector<BeamHypothesis> done;

        struct Candidate {
            TokenSeq tokens;
            double log_prob;
            std::size_t parent;
        };

        for (std::size_t step = 0; step < max_len && !live.empty(); ++step) {
            std::vector<Candidate> cands;
            std::vector<DecGraphState> next_states(live.size());
            for (std::size_t p = 0; p < live.size(); ++p) {
                const std::int32_t prev = live[p].tokens.empty() ? Vocab::kBos : live[p].tokens.back();
                auto [logits, next] = decode_step_graph(tape, bound, prev, live[p].state, enc);
                next_states[p] = next;
                const auto lp = log_softmax(logits.value());
                for (std::size_t tok = 0; tok < lp.size(); ++tok) {
                    Candidate c;
                    c.tokens = live[p].tokens;
                    c.tokens.push_back(static_cast<std::int32_t>(tok));
                    c.log_prob = live[p].log_prob + lp[tok];
                    c.parent = p;
                    cands.push_back(std::move(c));
                }
            }
            std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
                return hyp_before(a.tokens, a.log_prob, b.tokens, b.log_prob);
            });
            if (cands.size() > beam_width) cands.resize(beam_width);

            std::vector<LiveHyp> next_live;
            for (auto& c : cands) {
                if (c.tokens.back() == Vocab::kEos) {
                    done.push_back(BeamHypothesis{std::move(c.tokens), c.log_prob, true});
                } else {
                    next_live.push_back(LiveHyp{std::move(c.tokens), c.log_prob, next_states[c.parent]});
                }
            }

            // prune live branches that can no longer beat the kept finished set
            if (done.size() >= beam_width) {
                std::sort(done.begin(), done.end(), [](const BeamHypothesis& a, const BeamHypothesis& b) {
                    return hyp_before(a.tokens, a.log_prob, b.tokens, b.log_prob);
                });
                done.resize(beam_width);
                const double cutoff = done.back().log_prob;
                std::erase_if(next_live, [&](const LiveHyp& h) { return h.log_prob < cutoff; });
            }
            live = std::move(next_live);
        }

        for (auto& h : live) done.push_back(BeamHypothesis{std::move(h.tokens), h.log_prob, false});
        std::sort(done.begin(), done.end(), [](const BeamHypothesis& a, const BeamHypothesis& b) {
            return hyp_before(a.tokens, a.log_prob, b.tokens, b.log_prob);
        });
        if (done.size() > beam_width) done.resize(beam_width);
        tape.rewind(base);
        return done;
    }
};

BeamDecoder::BeamDecoder(const ModelParams& params) : impl_(std::make_unique<Impl>(params)) {}
BeamDecoder::~BeamDecoder() = default;

std::vector<BeamHypothesis> BeamDecoder::decode(const TokenSeq& input, std::size_t beam_width,
                                                std::size_t max_len) {
    return impl_->decode(input, beam_width, max_len);
}

std::vector<BeamHypothesis> beam_search(const ModelParams& params, const TokenSeq& input,
                                        std::size_t beam_width, std::size_t max_len) {
    BeamDecoder dec(params);
    return dec.decode(input, beam_width, max_len);
}

}  // namespace wuglab::seq2seq
