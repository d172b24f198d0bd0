#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ignn/error.hpp"
#include "ignn/sparse.hpp"
#include "ignn/tensor.hpp"

namespace ignn {

// Reverse-mode tape over dense tensors. Nodes are appended in topological
// order (operands always precede results), so the backward sweep is a single
// reverse pass. A tape is confined to one training step; it is rebuilt per
// epoch.
class Tape {
    enum class Op {
        leaf,
        matmul,
        spmm,
        add,
        add_row_vector,
        hadamard,
        scale,
        concat_cols,
        relu,
        sigmoid,
        l2_normalize_rows,
        row_pair_inner,
        sum,
        bce_with_logits_sum,
        pair_squared_error_sum,
    };

    struct Node {
        Op op = Op::leaf;
        int a = -1;
        int b = -1;
        Tensor value;
        Tensor grad;
        bool needs_grad = false;
        double scalar = 0.0;                    // scale factor
        const SparseAdjacency* adj = nullptr;   // spmm operand (borrowed)
        std::vector<std::pair<int, int>> pairs; // row_pair_inner indices
        std::vector<double> targets;            // fused-loss labels/targets
    };

public:
    static constexpr double kNormEps = 1e-12;    // added inside the row norm
    static constexpr double kLogClamp = 1e-12;   // floor for log arguments

    // Leaf that participates in gradient accumulation (a parameter).
    int leaf(Tensor value) { return push_leaf(std::move(value), true); }

    // Leaf excluded from gradient accumulation (input data, targets).
    int constant(Tensor value) { return push_leaf(std::move(value), false); }

    int matmul(int a, int b) {
        const Tensor& x = value(a);
        const Tensor& y = value(b);
        if (x.cols() != y.rows()) {
            throw usage_error("matmul: inner dimensions differ (" + shape_str(x) + " vs " + shape_str(y) + ")");
        }
        Tensor out(x.rows(), y.cols());
        matmul_accumulate(x, y, out);
        return push(Op::matmul, a, b, std::move(out));
    }

    int spmm(const SparseAdjacency& s, int x) {
        const Tensor& xv = value(x);
        if (s.n() != xv.rows()) throw usage_error("spmm: adjacency size does not match rows");
        Tensor out(s.n(), xv.cols());
        s.multiply(xv, out);
        const int id = push(Op::spmm, x, -1, std::move(out));
        nodes_[static_cast<std::size_t>(id)].adj = &s;
        return id;
    }

    int add(int a, int b) {
        const Tensor& x = value(a);
        const Tensor& y = value(b);
        if (!x.same_shape(y)) throw usage_error("add: shape mismatch");
        Tensor out(x.rows(), x.cols());
        for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = x.data()[k] + y.data()[k];
        return push(Op::add, a, b, std::move(out));
    }

    // Broadcasts a 1 x C bias over every row of a.
    int add_row_vector(int a, int bias) {
        const Tensor& x = value(a);
        const Tensor& v = value(bias);
        if (v.rows() != 1 || v.cols() != x.cols()) throw usage_error("add_row_vector: bias must be 1 x cols(a)");
        Tensor out(x.rows(), x.cols());
        for (int i = 0; i < x.rows(); ++i) {
            for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) + v(0, j);
        }
        return push(Op::add_row_vector, a, bias, std::move(out));
    }

    int hadamard(int a, int b) {
        const Tensor& x = value(a);
        const Tensor& y = value(b);
        if (!x.same_shape(y)) throw usage_error("hadamard: shape mismatch");
        Tensor out(x.rows(), x.cols());
        for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = x.data()[k] * y.data()[k];
        return push(Op::hadamard, a, b, std::move(out));
    }

    int scale(int a, double k) {
        const Tensor& x = value(a);
        Tensor out(x.rows(), x.cols());
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = k * x.data()[i];
        const int id = push(Op::scale, a, -1, std::move(out));
        nodes_[static_cast<std::size_t>(id)].scalar = k;
        return id;
    }

    int concat_cols(int a, int b) {
        const Tensor& x = value(a);
        const Tensor& y = value(b);
        if (x.rows() != y.rows()) throw usage_error("concat_cols: row count mismatch");
        Tensor out(x.rows(), x.cols() + y.cols());
        for (int i = 0; i < x.rows(); ++i) {
            for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
            for (int j = 0; j < y.cols(); ++j) out(i, x.cols() + j) = y(i, j);
        }
        return push(Op::concat_cols, a, b, std::move(out));
    }

    int relu(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows(), x.cols());
        for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = x.data()[k] > 0.0 ? x.data()[k] : 0.0;
        return push(Op::relu, a, -1, std::move(out));
    }

    int sigmoid(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows(), x.cols());
        for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = sigmoid_scalar(x.data()[k]);
        return push(Op::sigmoid, a, -1, std::move(out));
    }

    int l2_normalize_rows(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows(), x.cols());
        for (int i = 0; i < x.rows(); ++i) {
            double dot = 0.0;
            for (int j = 0; j < x.cols(); ++j) dot += x(i, j) * x(i, j);
            const double inv = 1.0 / std::sqrt(dot + kNormEps);
            for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) * inv;
        }
        return push(Op::l2_normalize_rows, a, -1, std::move(out));
    }

    // M x 1 vector of row inner products <z[i], z[j]> over the given pairs.
    int row_pair_inner(int z, std::vector<std::pair<int, int>> pairs) {
        const Tensor& x = value(z);
        Tensor out(static_cast<int>(pairs.size()), 1);
        for (std::size_t m = 0; m < pairs.size(); ++m) {
            const auto [i, j] = pairs[m];
            if (i < 0 || i >= x.rows() || j < 0 || j >= x.rows()) {
                throw usage_error("row_pair_inner: pair index out of range");
            }
            out(static_cast<int>(m), 0) = row_dot(x, i, x, j);
        }
        const int id = push(Op::row_pair_inner, z, -1, std::move(out));
        nodes_[static_cast<std::size_t>(id)].pairs = std::move(pairs);
        return id;
    }

    int sum(int a) {
        const Tensor& x = value(a);
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += x.data()[k];
        Tensor out(1, 1);
        out(0, 0) = s;
        return push(Op::sum, a, -1, std::move(out));
    }

    // Scalar sum of binary cross entropies of sigmoid(s) against labels.
    // Log arguments are clamped below at kLogClamp; the gradient is the exact
    // derivative of the clamped expression.
    int bce_with_logits_sum(int s, std::vector<double> labels) {
        const Tensor& x = value(s);
        if (x.cols() != 1 || static_cast<std::size_t>(x.rows()) != labels.size()) {
            throw usage_error("bce_with_logits_sum: logits must be M x 1 matching labels");
        }
        double loss = 0.0;
        for (int m = 0; m < x.rows(); ++m) {
            const double p = sigmoid_scalar(x(m, 0));
            const double y = labels[static_cast<std::size_t>(m)];
            loss -= y * std::log(std::max(p, kLogClamp)) + (1.0 - y) * std::log(std::max(1.0 - p, kLogClamp));
        }
        Tensor out(1, 1);
        out(0, 0) = loss;
        const int id = push(Op::bce_with_logits_sum, s, -1, std::move(out));
        nodes_[static_cast<std::size_t>(id)].targets = std::move(labels);
        return id;
    }

    // Scalar sum of ((1 - s_m)/2 - t_m)^2 over pair scores s and targets t.
    int pair_squared_error_sum(int s, std::vector<double> targets) {
        const Tensor& x = value(s);
        if (x.cols() != 1 || static_cast<std::size_t>(x.rows()) != targets.size()) {
            throw usage_error("pair_squared_error_sum: scores must be M x 1 matching targets");
        }
        double loss = 0.0;
        for (int m = 0; m < x.rows(); ++m) {
            const double r = (1.0 - x(m, 0)) / 2.0 - targets[static_cast<std::size_t>(m)];
            loss += r * r;
        }
        Tensor out(1, 1);
        out(0, 0) = loss;
        const int id = push(Op::pair_squared_error_sum, s, -1, std::move(out));
        nodes_[static_cast<std::size_t>(id)].targets = std::move(targets);
        return id;
    }

    const Tensor& value(int id) const { return nodes_[check(id)].value; }

    const Tensor& grad(int id) const {
        const Node& n = nodes_[check(id)];
        if (!n.needs_grad) throw usage_error("grad: node does not accumulate gradients");
        return n.grad;
    }

    std::size_t size() const { return nodes_.size(); }

    void clear() { nodes_.clear(); }

    // Reverse sweep from a scalar loss; gradients accumulate into every node
    // with needs_grad. Deterministic: identical tapes yield bit-identical
    // gradients.
    void backward(int loss_id) {
        Node& root = nodes_[check(loss_id)];
        if (root.value.rows() != 1 || root.value.cols() != 1) {
            throw usage_error("backward: loss must be a 1x1 tensor");
        }
        if (!root.needs_grad) throw usage_error("backward: loss does not depend on any parameter");
        for (Node& n : nodes_) {
            if (n.needs_grad) {
                n.grad = Tensor(n.value.rows(), n.value.cols());
            }
        }
        root.grad(0, 0) = 1.0;

        for (int id = loss_id; id >= 0; --id) {
            Node& n = nodes_[static_cast<std::size_t>(id)];
            if (!n.needs_grad) continue;
            backward_node(n);
        }
    }

private:
    static double sigmoid_scalar(double x) {
        if (x >= 0.0) {
            const double e = std::exp(-x);
            return 1.0 / (1.0 + e);
        }
        const double e = std::exp(x);
        return e / (1.0 + e);
    }

    static std::string shape_str(const Tensor& t) {
        return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
    }

    std::size_t check(int id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) throw usage_error("invalid tape node id");
        return static_cast<std::size_t>(id);
    }

    int push_leaf(Tensor value, bool needs_grad) {
        Node n;
        n.op = Op::leaf;
        n.value = std::move(value);
        n.needs_grad = needs_grad;
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    int push(Op op, int a, int b, Tensor value) {
        Node n;
        n.op = op;
        n.a = a;
        n.b = b;
        n.value = std::move(value);
        n.needs_grad = (a >= 0 && nodes_[static_cast<std::size_t>(a)].needs_grad) ||
                       (b >= 0 && nodes_[static_cast<std::size_t>(b)].needs_grad);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    Node* parent_if_grad(int id) {
        if (id < 0) return nullptr;
        Node& p = nodes_[static_cast<std::size_t>(id)];
        return p.needs_grad ? &p : nullptr;
    }

    void backward_node(Node& n) {
        Node* pa = parent_if_grad(n.a);
        Node* pb = parent_if_grad(n.b);
        const Tensor& g = n.grad;

        switch (n.op) {
            case Op::leaf:
                break;
            case Op::matmul: {
                const Tensor& av = nodes_[static_cast<std::size_t>(n.a)].value;
                const Tensor& bv = nodes_[static_cast<std::size_t>(n.b)].value;
                if (pa) matmul_a_bt_accumulate(g, bv, pa->grad);
                if (pb) matmul_at_b_accumulate(av, g, pb->grad);
                break;
            }
            case Op::spmm:
                if (pa) n.adj->multiply_transposed_accumulate(g, pa->grad);
                break;
            case Op::add:
                if (pa) accumulate(pa->grad, g);
                if (pb) accumulate(pb->grad, g);
                break;
            case Op::add_row_vector:
                if (pa) accumulate(pa->grad, g);
                if (pb) {
                    for (int i = 0; i < g.rows(); ++i) {
                        for (int j = 0; j < g.cols(); ++j) pb->grad(0, j) += g(i, j);
                    }
                }
                break;
            case Op::hadamard: {
                const Tensor& av = nodes_[static_cast<std::size_t>(n.a)].value;
                const Tensor& bv = nodes_[static_cast<std::size_t>(n.b)].value;
                if (pa) {
                    for (std::size_t k = 0; k < g.size(); ++k) pa->grad.data()[k] += g.data()[k] * bv.data()[k];
                }
                if (pb) {
                    for (std::size_t k = 0; k < g.size(); ++k) pb->grad.data()[k] += g.data()[k] * av.data()[k];
                }
                break;
            }
            case Op::scale:
                if (pa) {
                    for (std::size_t k = 0; k < g.size(); ++k) pa->grad.data()[k] += n.scalar * g.data()[k];
                }
                break;
            case Op::concat_cols:
                if (pa) {
                    for (int i = 0; i < pa->grad.rows(); ++i) {
                        for (int j = 0; j < pa->grad.cols(); ++j) pa->grad(i, j) += g(i, j);
                    }
                }
                if (pb) {
                    const int off = nodes_[static_cast<std::size_t>(n.a)].value.cols();
                    for (int i = 0; i < pb->grad.rows(); ++i) {
                        for (int j = 0; j < pb->grad.cols(); ++j) pb->grad(i, j) += g(i, off + j);
                    }
                }
                break;
            case Op::relu: {
                if (pa) {
                    const Tensor& av = nodes_[static_cast<std::size_t>(n.a)].value;
                    for (std::size_t k = 0; k < g.size(); ++k) {
                        if (av.data()[k] > 0.0) pa->grad.data()[k] += g.data()[k];
                    }
                }
                break;
            }
            case Op::sigmoid: {
                if (pa) {
                    for (std::size_t k = 0; k < g.size(); ++k) {
                        const double y = n.value.data()[k];
                        pa->grad.data()[k] += g.data()[k] * y * (1.0 - y);
                    }
                }
                break;
            }
            case Op::l2_normalize_rows: {
                if (pa) {
                    const Tensor& x = nodes_[static_cast<std::size_t>(n.a)].value;
                    for (int i = 0; i < x.rows(); ++i) {
                        double dot = 0.0;
                        double gx = 0.0;
                        for (int j = 0; j < x.cols(); ++j) {
                            dot += x(i, j) * x(i, j);
                            gx += g(i, j) * x(i, j);
                        }
                        const double norm = std::sqrt(dot + kNormEps);
                        const double inv = 1.0 / norm;
                        const double inv3 = inv * inv * inv;
                        for (int j = 0; j < x.cols(); ++j) {
                            pa->grad(i, j) += g(i, j) * inv - x(i, j) * gx * inv3;
                        }
                    }
                }
                break;
            }
            case Op::row_pair_inner: {
                if (pa) {
                    const Tensor& z = nodes_[static_cast<std::size_t>(n.a)].value;
                    const int d = z.cols();
                    for (std::size_t m = 0; m < n.pairs.size(); ++m) {
                        const auto [i, j] = n.pairs[m];
                        const double gm = g(static_cast<int>(m), 0);
                        if (gm == 0.0) continue;
                        const double* zi = z.data() + static_cast<std::size_t>(i) * d;
                        const double* zj = z.data() + static_cast<std::size_t>(j) * d;
                        double* gi = pa->grad.data() + static_cast<std::size_t>(i) * d;
                        double* gj = pa->grad.data() + static_cast<std::size_t>(j) * d;
                        for (int c = 0; c < d; ++c) {
                            gi[c] += gm * zj[c];
                            gj[c] += gm * zi[c];
                        }
                    }
                }
                break;
            }
            case Op::sum:
                if (pa) {
                    const double gm = g(0, 0);
                    for (std::size_t k = 0; k < pa->grad.size(); ++k) pa->grad.data()[k] += gm;
                }
                break;
            case Op::bce_with_logits_sum: {
                if (pa) {
                    const Tensor& s = nodes_[static_cast<std::size_t>(n.a)].value;
                    const double gm = g(0, 0);
                    for (int m = 0; m < s.rows(); ++m) {
                        const double p = sigmoid_scalar(s(m, 0));
                        const double y = n.targets[static_cast<std::size_t>(m)];
                        double ds = 0.0;
                        if (p > kLogClamp) ds -= y * (1.0 - p);
                        if (1.0 - p > kLogClamp) ds += (1.0 - y) * p;
                        pa->grad(m, 0) += gm * ds;
                    }
                }
                break;
            }
            case Op::pair_squared_error_sum: {
                if (pa) {
                    const Tensor& s = nodes_[static_cast<std::size_t>(n.a)].value;
                    const double gm = g(0, 0);
                    for (int m = 0; m < s.rows(); ++m) {
                        const double r = (1.0 - s(m, 0)) / 2.0 - n.targets[static_cast<std::size_t>(m)];
                        pa->grad(m, 0) += gm * (-r);
                    }
                }
                break;
            }
        }
    }

    static void accumulate(Tensor& dst, const Tensor& src) {
        for (std::size_t k = 0; k < dst.size(); ++k) dst.data()[k] += src.data()[k];
    }

    std::vector<Node> nodes_;
};

} // namespace ignn
