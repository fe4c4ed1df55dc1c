#include "wuglab/tape.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace wuglab::numerics {

namespace {
using MatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using MutMatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using VecMap = Eigen::Map<const Eigen::VectorXd>;
using MutVecMap = Eigen::Map<Eigen::VectorXd>;

MatMap mat(const Tensor& t) {
    return MatMap(t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}
MutMatMap mat(Tensor& t) {
    return MutMatMap(t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}
VecMap vec(const Tensor& t) { return VecMap(t.data(), static_cast<Eigen::Index>(t.size())); }
MutVecMap vec(Tensor& t) { return MutVecMap(t.data(), static_cast<Eigen::Index>(t.size())); }
}  // namespace

const Tensor& Var::value() const { return tape->value(*this); }
Tensor Var::grad() const { return tape->grad(*this); }

Var Tape::push(Node&& n) {
    nodes_.push_back(std::move(n));
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1), this};
}

Var Tape::leaf(Tensor v) {
    Node n;
    n.op = Op::Leaf;
    n.value = std::move(v);
    return push(std::move(n));
}

Var Tape::constant(Tensor v) {
    Node n;
    n.op = Op::Constant;
    n.value = std::move(v);
    return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
    Node n;
    n.op = Op::MatMul;
    n.n_in = 2;
    n.in = {a.id, b.id};
    n.value = numerics::matmul(nodes_[a.id].value, nodes_[b.id].value);
    check_finite(n.value, "matmul");
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    Node n;
    n.op = Op::Add;
    n.n_in = 2;
    n.in = {a.id, b.id};
    n.value = numerics::add(nodes_[a.id].value, nodes_[b.id].value);
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    Node n;
    n.op = Op::Mul;
    n.n_in = 2;
    n.in = {a.id, b.id};
    n.value = numerics::mul(nodes_[a.id].value, nodes_[b.id].value);
    check_finite(n.value, "mul");
    return push(std::move(n));
}

Var Tape::tanh(Var a) {
    Node n;
    n.op = Op::Tanh;
    n.n_in = 1;
    n.in = {a.id, 0};
    n.value = numerics::tanh(nodes_[a.id].value);
    return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
    Node n;
    n.op = Op::Sigmoid;
    n.n_in = 1;
    n.in = {a.id, 0};
    n.value = numerics::sigmoid(nodes_[a.id].value);
    return push(std::move(n));
}

Var Tape::softmax(Var a) {
    Node n;
    n.op = Op::Softmax;
    n.n_in = 1;
    n.in = {a.id, 0};
    n.value = numerics::softmax(nodes_[a.id].value);
    return push(std::move(n));
}

Var Tape::concat(Var a, Var b) {
    Node n;
    n.op = Op::Concat;
    n.n_in = 2;
    n.in = {a.id, b.id};
    n.value = numerics::concat(nodes_[a.id].value, nodes_[b.id].value);
    return push(std::move(n));
}

Var Tape::stack_rows(std::span<const Var> rows) {
    if (rows.empty()) throw ArgumentError("stack_rows: no rows");
    const std::size_t cols = nodes_[rows.front().id].value.size();
    Node n;
    n.op = Op::StackRows;
    n.pool_begin = static_cast<std::uint32_t>(input_pool_.size());
    n.pool_count = static_cast<std::uint32_t>(rows.size());
    Tensor out({rows.size(), cols});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Tensor& v = nodes_[rows[r].id].value;
        if (v.rank() != 1 || v.size() != cols)
            throw ShapeError("stack_rows: row " + std::to_string(r) + " has shape " + v.shape_str());
        input_pool_.push_back(rows[r].id);
        for (std::size_t i = 0; i < cols; ++i) out[r * cols + i] = v[i];
    }
    n.value = std::move(out);
    return push(std::move(n));
}

Var Tape::lookup(Var table, std::int32_t row) {
    Node n;
    n.op = Op::Lookup;
    n.n_in = 1;
    n.in = {table.id, 0};
    n.aux = row;
    n.value = numerics::lookup_row(nodes_[table.id].value, row);
    return push(std::move(n));
}

Var Tape::nll_mean(std::span<const Var> prob_rows, std::span<const std::int32_t> targets) {
    if (prob_rows.size() != targets.size() || prob_rows.empty())
        throw ArgumentError("nll_mean: needs one probability row per target");
    std::vector<Tensor> rows;
    rows.reserve(prob_rows.size());
    for (const Var& v : prob_rows) rows.push_back(nodes_[v.id].value);

    Node n;
    n.op = Op::NllMean;
    n.pool_begin = static_cast<std::uint32_t>(input_pool_.size());
    n.pool_count = static_cast<std::uint32_t>(prob_rows.size());
    for (const Var& v : prob_rows) input_pool_.push_back(v.id);
    n.tokens_begin = static_cast<std::uint32_t>(token_pool_.size());
    n.tokens_count = static_cast<std::uint32_t>(targets.size());
    token_pool_.insert(token_pool_.end(), targets.begin(), targets.end());
    n.value = numerics::nll_mean(rows, targets);
    return push(std::move(n));
}

Tensor Tape::grad(Var v) const {
    const Node& n = nodes_[v.id];
    if (n.grad.size() == 0) return Tensor(n.value.shape());  // zeros
    return n.grad;
}

void Tape::clear() {
    nodes_.clear();
    input_pool_.clear();
    token_pool_.clear();
}

void Tape::rewind(Mark m) {
    if (m.nodes > nodes_.size()) throw ArgumentError("rewind: mark is ahead of the tape");
    nodes_.resize(m.nodes);
    input_pool_.resize(m.inputs);
    token_pool_.resize(m.tokens);
}

Tensor& Tape::ensure_grad(std::uint32_t id) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) n.grad = Tensor(n.value.shape());
    return n.grad;
}

void Tape::zero_grads() {
    for (Node& n : nodes_) n.grad = Tensor();
}

void Tape::backward(Var loss, bool reset_grads) {
    if (loss.tape != this) throw ArgumentError("backward: loss from another tape");
    Node& ln = nodes_[loss.id];
    if (!ln.value.is_scalar())
        throw ArgumentError("backward: loss must be scalar, got shape " + ln.value.shape_str());

    if (reset_grads) zero_grads();
    ensure_grad(loss.id)[0] += 1.0;

    for (std::uint32_t id = loss.id + 1; id-- > 0;) {
        if (nodes_[id].grad.size() == 0) continue;  // not on a path to the loss
        backprop_node(id);
    }
}

void Tape::backprop_node(std::uint32_t id) {
    Node& n = nodes_[id];
    const Tensor& g = n.grad;
    const auto in_value = [&](int k) -> const Tensor& { return nodes_[n.in[static_cast<std::size_t>(k)]].value; };
    const auto skip = [&](int k) { return nodes_[n.in[static_cast<std::size_t>(k)]].op == Op::Constant; };

    switch (n.op) {
        case Op::Leaf:
        case Op::Constant:
            return;
        case Op::MatMul: {
            const Tensor& a = in_value(0);
            const Tensor& b = in_value(1);
            if (a.rank() == 2 && b.rank() == 2) {
                if (!skip(0)) mat(ensure_grad(n.in[0])).noalias() += mat(g) * mat(b).transpose();
                if (!skip(1)) mat(ensure_grad(n.in[1])).noalias() += mat(a).transpose() * mat(g);
            } else if (a.rank() == 2 && b.rank() == 1) {
                if (!skip(0)) mat(ensure_grad(n.in[0])).noalias() += vec(g) * vec(b).transpose();
                if (!skip(1)) vec(ensure_grad(n.in[1])).noalias() += mat(a).transpose() * vec(g);
            } else {  // [k] x [k,n]
                if (!skip(0)) vec(ensure_grad(n.in[0])).noalias() += mat(b) * vec(g);
                if (!skip(1)) mat(ensure_grad(n.in[1])).noalias() += vec(a) * vec(g).transpose();
            }
            return;
        }
        case Op::Add: {
            for (int k = 0; k < 2; ++k) {
                if (skip(k)) continue;
                Tensor& gi = ensure_grad(n.in[static_cast<std::size_t>(k)]);
                for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
            }
            return;
        }
        case Op::Mul: {
            if (!skip(0)) {
                Tensor& ga = ensure_grad(n.in[0]);
                const Tensor& b = in_value(1);
                for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
            }
            if (!skip(1)) {
                Tensor& gb = ensure_grad(n.in[1]);
                const Tensor& a = in_value(0);
                for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
            }
            return;
        }
        case Op::Tanh: {
            if (skip(0)) return;
            Tensor& gi = ensure_grad(n.in[0]);
            for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * (1.0 - n.value[i] * n.value[i]);
            return;
        }
        case Op::Sigmoid: {
            if (skip(0)) return;
            Tensor& gi = ensure_grad(n.in[0]);
            for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * n.value[i] * (1.0 - n.value[i]);
            return;
        }
        case Op::Softmax: {
            if (skip(0)) return;
            Tensor& gi = ensure_grad(n.in[0]);
            const Tensor& y = n.value;
            const std::size_t cols = y.rank() == 2 ? y.cols() : y.size();
            const std::size_t rows = y.size() / cols;
            for (std::size_t r = 0; r < rows; ++r) {
                const std::size_t off = r * cols;
                double dot = 0.0;
                for (std::size_t i = 0; i < cols; ++i) dot += g[off + i] * y[off + i];
                for (std::size_t i = 0; i < cols; ++i) gi[off + i] += y[off + i] * (g[off + i] - dot);
            }
            return;
        }
        case Op::Concat: {
            const std::size_t na = in_value(0).size();
            if (!skip(0)) {
                Tensor& ga = ensure_grad(n.in[0]);
                for (std::size_t i = 0; i < na; ++i) ga[i] += g[i];
            }
            if (!skip(1)) {
                Tensor& gb = ensure_grad(n.in[1]);
                for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[na + i];
            }
            return;
        }
        case Op::StackRows: {
            const std::size_t cols = n.value.cols();
            for (std::uint32_t r = 0; r < n.pool_count; ++r) {
                const std::uint32_t rid = input_pool_[n.pool_begin + r];
                if (nodes_[rid].op == Op::Constant) continue;
                Tensor& gr = ensure_grad(rid);
                for (std::size_t i = 0; i < cols; ++i) gr[i] += g[r * cols + i];
            }
            return;
        }
        case Op::Lookup: {
            if (skip(0)) return;
            Tensor& gt = ensure_grad(n.in[0]);
            const std::size_t cols = in_value(0).cols();
            double* row = gt.data() + static_cast<std::size_t>(n.aux) * cols;
            for (std::size_t i = 0; i < cols; ++i) row[i] += g[i];
            return;
        }
        case Op::NllMean: {
            const double scale = g[0] / static_cast<double>(n.pool_count);
            for (std::uint32_t t = 0; t < n.pool_count; ++t) {
                const std::uint32_t pid = input_pool_[n.pool_begin + t];
                if (nodes_[pid].op == Op::Constant) continue;
                const std::int32_t y = token_pool_[n.tokens_begin + t];
                Tensor& gp = ensure_grad(pid);
                const double py = nodes_[pid].value[static_cast<std::size_t>(y)];
                gp[static_cast<std::size_t>(y)] -= scale / py;
            }
            return;
        }
    }
}

double grad_check(const GraphFn& f, const std::vector<Tensor>& params, double h) {
    if (!(h > 0.0)) throw ArgumentError("grad_check: h must be positive");

    const auto eval = [&](const std::vector<Tensor>& p) {
        Tape tape;
        std::vector<Var> leaves;
        leaves.reserve(p.size());
        for (const Tensor& t : p) leaves.push_back(tape.leaf(t));
        const Var loss = f(tape, leaves);
        const double v = loss.value().item();
        if (!std::isfinite(v)) throw NumericError("grad_check: non-finite loss");
        return v;
    };

    // analytic gradients
    std::vector<Tensor> analytic;
    {
        Tape tape;
        std::vector<Var> leaves;
        leaves.reserve(params.size());
        for (const Tensor& t : params) leaves.push_back(tape.leaf(t));
        const Var loss = f(tape, leaves);
        if (!std::isfinite(loss.value().item())) throw NumericError("grad_check: non-finite loss");
        tape.backward(loss);
        for (const Var& v : leaves) analytic.push_back(v.grad());
    }

    double worst = 0.0;
    std::vector<Tensor> probe = params;
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p].size(); ++i) {
            const double orig = probe[p][i];
            probe[p][i] = orig + h;
            const double fp = eval(probe);
            probe[p][i] = orig - h;
            const double fm = eval(probe);
            probe[p][i] = orig;

            const double numeric = (fp - fm) / (2.0 * h);
            const double a = analytic[p][i];
            const double err = std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
            worst = std::max(worst, err);
        }
    }
    return worst;
}

}  // namespace wuglab::numerics
