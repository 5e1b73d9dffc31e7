#include "hodgecover/wanda.hpp"

#include "hodgecover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hodgecover {

int PruneMask::kept_in_row(int r) const {
    int c = 0;
    for (int j = 0; j < cols; ++j) c += at(r, j) ? 1 : 0;
    return c;
}

std::string PruneMask::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < keep.size(); i += 4) {
        int nibble = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            if (i + b < keep.size() && keep[i + b]) nibble |= 8 >> b;
        }
        out.push_back(digits[nibble]);
    }
    return out;
}

PruneMask PruneMask::from_hex(int rows, int cols, const std::string& hex) {
    if (rows < 0 || cols < 0) throw DataError("negative mask shape");
    const std::size_t bits = static_cast<std::size_t>(rows) * cols;
    if (hex.size() != (bits + 3) / 4) throw DataError("mask bitset length does not match its shape");
    PruneMask m;
    m.rows = rows;
    m.cols = cols;
    m.keep.assign(bits, false);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char ch = hex[i];
        int nibble;
        if (ch >= '0' && ch <= '9') nibble = ch - '0';
        else if (ch >= 'a' && ch <= 'f') nibble = ch - 'a' + 10;
        else throw DataError("mask bitset is not lowercase hex");
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t pos = 4 * i + b;
            const bool set = (nibble & (8 >> b)) != 0;
            if (pos < bits) m.keep[pos] = set;
            else if (set) throw DataError("mask bitset has padding bits set");
        }
    }
    std::size_t dropped = 0;
    for (bool k : m.keep) dropped += k ? 0 : 1;
    m.row_sparsity = bits == 0 ? 0.0 : static_cast<double>(dropped) / static_cast<double>(bits);
    return m;
}

int wanda_keep_count(int b, double r2) {
    if (!(r2 >= 0.0 && r2 < 1.0)) throw DataError("r2 must lie in [0, 1)");
    if (b < 0) throw ShapeError("negative column count");
    const int keep = static_cast<int>(std::ceil((1.0 - r2) * b - 1e-9));
    return std::clamp(keep, 0, b);
}

PruneResult wanda_prune_with_norms(const Eigen::MatrixXd& w, const Eigen::VectorXd& col_norms, double r2) {
    if (col_norms.size() != w.cols()) throw ShapeError("activation columns do not match weight columns");
    const int a = static_cast<int>(w.rows());
    const int b = static_cast<int>(w.cols());
    const int keep = wanda_keep_count(b, r2);

    PruneResult out;
    out.weights = Eigen::MatrixXd::Zero(a, b);
    out.mask.rows = a;
    out.mask.cols = b;
    out.mask.keep.assign(static_cast<std::size_t>(a) * b, false);
    std::vector<int> order(static_cast<std::size_t>(b));
    std::vector<double> score(static_cast<std::size_t>(b));
    for (int r = 0; r < a; ++r) {
        for (int c = 0; c < b; ++c) score[c] = std::abs(w(r, c)) * col_norms[c];
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return score[x] > score[y]; });
        for (int s = 0; s < keep; ++s) {
            const int c = order[s];
            out.mask.keep[static_cast<std::size_t>(r) * b + c] = true;
            out.weights(r, c) = w(r, c);
        }
    }
    out.mask.row_sparsity = b == 0 ? 0.0 : static_cast<double>(b - keep) / b;
    return out;
}

PruneResult wanda_prune(const Eigen::MatrixXd& w, const Eigen::MatrixXd& x, double r2) {
    if (x.cols() != w.cols()) {
        throw ShapeError("activation matrix has " + std::to_string(x.cols()) + " columns, weights have " +
                         std::to_string(w.cols()));
    }
    return wanda_prune_with_norms(w, x.colwise().norm().transpose(), r2);
}

double residual_sparsity(double r_total, double r1) {
    if (r1 >= 1.0) throw DataError("stage-1 rate must be below 1");
    return std::max(0.0, (r_total - r1) / (1.0 - r1));
}

}  // namespace hodgecover
