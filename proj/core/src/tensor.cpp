#include "wuglab/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace wuglab::numerics {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) throw ArgumentError("zero tensor dimension");
        n *= d;
    }
    return n;
}

using MatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using VecMap = Eigen::Map<const Eigen::VectorXd>;
using MutVecMap = Eigen::Map<Eigen::VectorXd>;

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b) {
    throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " + b.shape_str());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(shape_product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_product(shape_))
        throw ShapeError("tensor data size " + std::to_string(data_.size()) + " does not match shape " +
                         shape_str());
}

std::size_t Tensor::rows() const {
    if (rank() != 2) throw ShapeError("rows(): tensor is rank " + std::to_string(rank()));
    return shape_[0];
}

std::size_t Tensor::cols() const {
    if (rank() != 2) throw ShapeError("cols(): tensor is rank " + std::to_string(rank()));
    return shape_[1];
}

double& Tensor::at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
double Tensor::at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

double Tensor::item() const {
    if (!is_scalar()) throw ArgumentError("item(): tensor of size " + std::to_string(size()) + " is not scalar");
    return data_[0];
}

std::string Tensor::shape_str() const {
    std::ostringstream ss;
    ss << '[';
    for (std::size_t i = 0; i < shape_.size(); ++i) ss << (i ? "x" : "") << shape_[i];
    ss << ']';
    return ss.str();
}

void Tensor::fill(double v) {
    for (auto& x : data_) x = v;
}

bool Tensor::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

void check_finite(const Tensor& t, const char* op) {
    if (!t.all_finite()) throw NumericError(std::string(op) + ": non-finite value produced");
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() == 2 && b.rank() == 2) {
        if (a.cols() != b.rows()) shape_fail("matmul", a, b);
        Tensor out({a.rows(), b.cols()});
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> o(
            out.data(), static_cast<Eigen::Index>(out.rows()), static_cast<Eigen::Index>(out.cols()));
        o = MatMap(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())) *
            MatMap(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
        return out;
    }
    if (a.rank() == 2 && b.rank() == 1) {
        if (a.cols() != b.size()) shape_fail("matmul", a, b);
        Tensor out({a.rows()});
        MutVecMap(out.data(), static_cast<Eigen::Index>(out.size())) =
            MatMap(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())) *
            VecMap(b.data(), static_cast<Eigen::Index>(b.size()));
        return out;
    }
    if (a.rank() == 1 && b.rank() == 2) {
        if (a.size() != b.rows()) shape_fail("matmul", a, b);
        Tensor out({b.cols()});
        MutVecMap(out.data(), static_cast<Eigen::Index>(out.size())) =
            MatMap(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()))
                .transpose() *
            VecMap(a.data(), static_cast<Eigen::Index>(a.size()));
        return out;
    }
    shape_fail("matmul", a, b);
}

Tensor add(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_fail("add", a, b);
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_fail("mul", a, b);
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Tensor tanh(const Tensor& a) {
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::tanh(a[i]);
    return out;
}

Tensor sigmoid(const Tensor& a) {
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-a[i]));
    return out;
}

namespace {

void softmax_span(const double* in, double* out, std::size_t n) {
    double mx = in[0];
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, in[i]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(in[i] - mx);
        total += out[i];
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= total;
}

}  // namespace

Tensor softmax(const Tensor& a) {
    Tensor out(a.shape());
    if (a.rank() == 1) {
        softmax_span(a.data(), out.data(), a.size());
    } else if (a.rank() == 2) {
        for (std::size_t r = 0; r < a.rows(); ++r)
            softmax_span(a.data() + r * a.cols(), out.data() + r * a.cols(), a.cols());
    } else {
        throw ShapeError("softmax: rank " + std::to_string(a.rank()) + " unsupported");
    }
    check_finite(out, "softmax");
    return out;
}

Tensor concat(const Tensor& a, const Tensor& b) {
    if (a.rank() != 1 || b.rank() != 1) shape_fail("concat", a, b);
    Tensor out({a.size() + b.size()});
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[a.size() + i] = b[i];
    return out;
}

Tensor lookup_row(const Tensor& table, std::int32_t index) {
    if (table.rank() != 2) throw ShapeError("lookup_row: table must be rank 2, got " + table.shape_str());
    if (index < 0 || static_cast<std::size_t>(index) >= table.rows())
        throw ArgumentError("lookup_row: index " + std::to_string(index) + " out of " +
                            std::to_string(table.rows()) + " rows");
    Tensor out({table.cols()});
    const double* src = table.data() + static_cast<std::size_t>(index) * table.cols();
    for (std::size_t i = 0; i < table.cols(); ++i) out[i] = src[i];
    return out;
}

Tensor nll_mean(std::span<const Tensor> prob_rows, std::span<const std::int32_t> targets) {
    if (prob_rows.size() != targets.size() || prob_rows.empty())
        throw ArgumentError("nll_mean: needs one probability row per target");
    double total = 0.0;
    for (std::size_t t = 0; t < prob_rows.size(); ++t) {
        const Tensor& p = prob_rows[t];
        if (p.rank() != 1) throw ShapeError("nll_mean: probability rows must be rank 1");
        const std::int32_t y = targets[t];
        if (y < 0 || static_cast<std::size_t>(y) >= p.size())
            throw ArgumentError("nll_mean: target index out of range");
        const double py = p[static_cast<std::size_t>(y)];
        if (!(py > 0.0)) throw NumericError("nll_mean: probability underflow");
        total -= std::log(py);
    }
    return Tensor::scalar(total / static_cast<double>(prob_rows.size()));
}

}  // namespace wuglab::numerics
