#pragma once

#include <algorithm>
#include <cstddef>
#include <tuple>
#include <vector>

#include "ignn/error.hpp"
#include "ignn/tensor.hpp"

namespace ignn {

// N x N sparse matrix in compressed row form; rows hold aggregation weights
// over graph neighborhoods. Immutable after construction.
class SparseAdjacency {
public:
    SparseAdjacency() = default;

    static SparseAdjacency from_triplets(int n, std::vector<std::tuple<int, int, double>> triplets) {
        SparseAdjacency s;
        s.n_ = n;
        std::sort(triplets.begin(), triplets.end());
        s.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& [r, c, v] : triplets) {
            if (r < 0 || r >= n || c < 0 || c >= n) throw usage_error("sparse triplet index out of range");
            (void)v;
            ++s.offsets_[static_cast<std::size_t>(r) + 1];
        }
        for (std::size_t i = 1; i < s.offsets_.size(); ++i) s.offsets_[i] += s.offsets_[i - 1];
        s.cols_.resize(triplets.size());
        s.vals_.resize(triplets.size());
        for (std::size_t k = 0; k < triplets.size(); ++k) {
            s.cols_[k] = std::get<1>(triplets[k]);
            s.vals_[k] = std::get<2>(triplets[k]);
        }
        return s;
    }

    int n() const { return n_; }
    std::size_t nnz() const { return cols_.size(); }

    // out = S * x ; out must be zeroed with shape (n, x.cols()).
    void multiply(const Tensor& x, Tensor& out) const {
        const int d = x.cols();
        for (int i = 0; i < n_; ++i) {
            double* orow = out.data() + static_cast<std::size_t>(i) * d;
            for (std::size_t k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
                const double v = vals_[k];
                const double* xrow = x.data() + static_cast<std::size_t>(cols_[k]) * d;
                for (int c = 0; c < d; ++c) orow[c] += v * xrow[c];
            }
        }
    }

    // out += S^T * g ; used by the spmm gradient.
    void multiply_transposed_accumulate(const Tensor& g, Tensor& out) const {
        const int d = g.cols();
        for (int i = 0; i < n_; ++i) {
            const double* grow = g.data() + static_cast<std::size_t>(i) * d;
            for (std::size_t k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
                const double v = vals_[k];
                double* orow = out.data() + static_cast<std::size_t>(cols_[k]) * d;
                for (int c = 0; c < d; ++c) orow[c] += v * grow[c];
            }
        }
    }

    // Dense copy, for small-matrix diagnostics and tests.
    Tensor to_dense() const {
        Tensor t(n_, n_);
        for (int i = 0; i < n_; ++i) {
            for (std::size_t k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
                t(i, cols_[k]) += vals_[k];
            }
        }
        return t;
    }

    double row_sum(int i) const {
        double s = 0.0;
        for (std::size_t k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
            s += vals_[k];
        }
        return s;
    }

private:
    int n_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<int> cols_;
    std::vector<double> vals_;
};

} // namespace ignn
