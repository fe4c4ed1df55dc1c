#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wuglab/tensor.hpp"

namespace wuglab::numerics {

class Tape;

/// Lightweight handle to a tape node.
struct Var {
    std::uint32_t id = 0;
    Tape* tape = nullptr;

    const Tensor& value() const;
    Tensor grad() const;
};

/// Append-only computation tape. Forward values are computed eagerly at
/// node creation; backward() accumulates gradients in reverse creation
/// order (the tape is topologically sorted by construction, hence acyclic).
///
/// A tape is confined to one thread; distinct tapes may run concurrently.
class Tape {
  public:
    enum class Op : std::uint8_t {
        Leaf,
        Constant,
        MatMul,
        Add,
        Mul,
        Tanh,
        Sigmoid,
        Softmax,
        Concat,
        StackRows,
        Lookup,
        NllMean,
    };

    /// Trainable input: participates in gradient accumulation.
    Var leaf(Tensor v);
    /// Non-trainable input (dropout masks, fixed vectors).
    Var constant(Tensor v);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var mul(Var a, Var b);
    Var tanh(Var a);
    Var sigmoid(Var a);
    Var softmax(Var a);
    Var concat(Var a, Var b);
    /// Concatenation along a new leading axis: T vectors [c] -> [T x c].
    Var stack_rows(std::span<const Var> rows);
    Var lookup(Var table, std::int32_t row);
    Var nll_mean(std::span<const Var> prob_rows, std::span<const std::int32_t> targets);

    /// Reverse-mode sweep from a scalar loss. Gradient accumulators are
    /// reset at the start of every call; leaves that do not reach the loss
    /// read back as zero. With reset_grads = false existing accumulators are
    /// kept, so successive backward passes (e.g. one per batch example, with
    /// the tape rewound in between) sum into the shared leaves.
    void backward(Var loss, bool reset_grads = true);

    /// Zeroes every existing gradient accumulator.
    void zero_grads();

    const Tensor& value(Var v) const { return nodes_[v.id].value; }
    /// Gradient after backward(); zeros if the node was not reached.
    Tensor grad(Var v) const;

    std::size_t size() const { return nodes_.size(); }
    /// Drops all nodes but keeps allocated capacity for reuse.
    void clear();

    /// Snapshot of the tape length; rewind() drops everything appended
    /// after the mark (earlier Vars stay valid).
    struct Mark {
        std::size_t nodes = 0, inputs = 0, tokens = 0;
    };
    Mark mark() const { return {nodes_.size(), input_pool_.size(), token_pool_.size()}; }
    void rewind(Mark m);

  private:
    struct Node {
        Op op = Op::Leaf;
        std::uint8_t n_in = 0;
        std::int32_t aux = 0;  // lookup row
        std::array<std::uint32_t, 2> in{};
        std::uint32_t pool_begin = 0, pool_count = 0;    // extra inputs (NllMean)
        std::uint32_t tokens_begin = 0, tokens_count = 0;
        Tensor value;
        Tensor grad;
    };

    Var push(Node&& n);
    Tensor& ensure_grad(std::uint32_t id);
    void backprop_node(std::uint32_t id);

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> input_pool_;
    std::vector<std::int32_t> token_pool_;
};

/// Builds a scalar loss on a fresh tape from leaf variables standing in for
/// `params` (same order).
using GraphFn = std::function<Var(Tape&, const std::vector<Var>&)>;

/// Central-difference verification of reverse-mode gradients. For every
/// entry of every parameter, compares the analytic gradient with
/// (f(x+h)-f(x-h))/2h and returns the worst relative error under
/// |a-n| / max(1, |a|, |n|) normalization. h must be positive; a non-finite
/// loss raises NumericError.
double grad_check(const GraphFn& f, const std::vector<Tensor>& params, double h);

}  // namespace wuglab::numerics
