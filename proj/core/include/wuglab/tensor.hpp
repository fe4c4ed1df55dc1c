#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "wuglab/util.hpp"

namespace wuglab::numerics {

/// Dense row-major double tensor. Rank 1 and 2 cover everything the model
/// needs; scalars are shape {1}.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, double fill);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor scalar(double v) { return Tensor({1}, {v}); }
    static Tensor row(std::initializer_list<double> v) {
        return Tensor({v.size()}, std::vector<double>(v));
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    bool is_scalar() const { return data_.size() == 1; }

    std::size_t rows() const;  // rank-2 only
    std::size_t cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t r, std::size_t c);
    double at(std::size_t r, std::size_t c) const;

    double item() const;  // scalar value; ArgumentError if size != 1

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    std::string shape_str() const;

    void fill(double v);
    bool all_finite() const;

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// Raises NumericError naming the op if the tensor holds NaN or Inf.
void check_finite(const Tensor& t, const char* op);

// ---------------------------------------------------------------------------
// The closed primitive set, forward-only. The tape ops wrap these.
// Shape mismatches raise ShapeError naming both shapes.
// ---------------------------------------------------------------------------

/// [m,k]x[k,n]->[m,n]; [m,k]x[k]->[m]; [k]x[k,n]->[n].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
/// Softmax over the last axis, computed with max subtraction.
Tensor softmax(const Tensor& a);
/// Rank-1 concatenation.
Tensor concat(const Tensor& a, const Tensor& b);
/// Row `index` of a rank-2 tensor, as a rank-1 tensor.
Tensor lookup_row(const Tensor& table, std::int32_t index);
/// Mean over steps of -log(probs[t][targets[t]]). probs rows must each sum
/// to ~1; a non-positive picked probability raises NumericError.
Tensor nll_mean(std::span<const Tensor> prob_rows, std::span<const std::int32_t> targets);

}  // namespace wuglab::numerics
