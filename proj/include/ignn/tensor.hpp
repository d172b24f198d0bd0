#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ignn/error.hpp"

namespace ignn {

// Dense row-major matrix of doubles. The library keeps all numerics in
// 64-bit precision; vectors are 1xC or Rx1 tensors.
class Tensor {
public:
    Tensor() = default;

    Tensor(int rows, int cols)
        : rows_(rows), cols_(cols), data_(check_size(rows, cols), 0.0) {}

    Tensor(int rows, int cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != check_size(rows, cols)) {
            throw usage_error("tensor value count does not match shape");
        }
    }

    static Tensor zeros(int rows, int cols) { return Tensor(rows, cols); }

    static Tensor full(int rows, int cols, double value) {
        Tensor t(rows, cols);
        for (double& x : t.data_) x = value;
        return t;
    }

    static Tensor identity(int n) {
        Tensor t(n, n);
        for (int i = 0; i < n; ++i) t(i, i) = 1.0;
        return t;
    }

    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
        Tensor t(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c) {
                throw usage_error("from_rows: ragged initializer");
            }
            int j = 0;
            for (double v : row) t(i, j++) = v;
            ++i;
        }
        return t;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(int r) {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<const double> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    void fill(double v) {
        for (double& x : data_) x = v;
    }

private:
    static std::size_t check_size(int rows, int cols) {
        if (rows < 0 || cols < 0) throw usage_error("negative tensor dimension");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline double row_dot(const Tensor& a, int i, const Tensor& b, int j) {
    const double* x = a.data() + static_cast<std::size_t>(i) * a.cols();
    const double* y = b.data() + static_cast<std::size_t>(j) * b.cols();
    double acc = 0.0;
    for (int c = 0; c < a.cols(); ++c) acc += x[c] * y[c];
    return acc;
}

inline double row_euclidean(const Tensor& a, int i, int j) {
    const double* x = a.data() + static_cast<std::size_t>(i) * a.cols();
    const double* y = a.data() + static_cast<std::size_t>(j) * a.cols();
    double acc = 0.0;
    for (int c = 0; c < a.cols(); ++c) {
        const double d = x[c] - y[c];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// out += a * b. Shapes must already agree; callers zero `out` as needed.
inline void matmul_accumulate(const Tensor& a, const Tensor& b, Tensor& out) {
    const int n = a.rows();
    const int k = a.cols();
    const int m = b.cols();
    for (int i = 0; i < n; ++i) {
        const double* arow = a.data() + static_cast<std::size_t>(i) * k;
        double* orow = out.data() + static_cast<std::size_t>(i) * m;
        for (int p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue; // one-hot inputs make A very sparse
            const double* brow = b.data() + static_cast<std::size_t>(p) * m;
            for (int j = 0; j < m; ++j) orow[j] += av * brow[j];
        }
    }
}

// out += a^T * b
inline void matmul_at_b_accumulate(const Tensor& a, const Tensor& b, Tensor& out) {
    const int n = a.rows();
    const int k = a.cols();
    const int m = b.cols();
    for (int i = 0; i < n; ++i) {
        const double* arow = a.data() + static_cast<std::size_t>(i) * k;
        const double* brow = b.data() + static_cast<std::size_t>(i) * m;
        for (int p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue;
            double* orow = out.data() + static_cast<std::size_t>(p) * m;
            for (int j = 0; j < m; ++j) orow[j] += av * brow[j];
        }
    }
}

// out += a * b^T
inline void matmul_a_bt_accumulate(const Tensor& a, const Tensor& b, Tensor& out) {
    const int n = a.rows();
    const int k = a.cols();
    const int m = b.rows();
    for (int i = 0; i < n; ++i) {
        const double* arow = a.data() + static_cast<std::size_t>(i) * k;
        double* orow = out.data() + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            const double* brow = b.data() + static_cast<std::size_t>(j) * k;
            double acc = 0.0;
            for (int p = 0; p < k; ++p) acc += arow[p] * brow[p];
            orow[j] += acc;
        }
    }
}

} // namespace ignn
