#include "nsfem/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsfem {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m(rows, cols);
    m.col_indices.reserve(triplets.size());
    m.values.reserve(triplets.size());
    for (size_t i = 0; i < triplets.size();) {
        const int r = triplets[i].row, c = triplets[i].col;
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::invalid_argument("SparseMatrix: triplet out of bounds");
        double v = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
            v += triplets[i++].value;
        m.col_indices.push_back(c);
        m.values.push_back(v);
        ++m.row_offsets[r + 1];
    }
    for (int r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
    return m;
}

Eigen::VectorXd SparseMatrix::apply(const Eigen::VectorXd& x) const {
    if (x.size() != cols) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            y[r] += values[k] * x[col_indices[k]];
    return y;
}

Eigen::VectorXd SparseMatrix::apply_transposed(const Eigen::VectorXd& x) const {
    if (x.size() != rows) throw std::invalid_argument("SparseMatrix::apply_transposed: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            y[col_indices[k]] += values[k] * x[r];
    return y;
}

SparseMatrix SparseMatrix::scaled(double s) const {
    SparseMatrix m = *this;
    for (double& v : m.values) v *= s;
    return m;
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other, double s) const {
    if (rows != other.rows || cols != other.cols)
        throw std::invalid_argument("SparseMatrix::plus: shape mismatch");
    SparseMatrix m(rows, cols);
    m.col_indices.reserve(values.size() + other.values.size());
    m.values.reserve(values.size() + other.values.size());
    for (int r = 0; r < rows; ++r) {
        int ka = row_offsets[r], kb = other.row_offsets[r];
        const int ea = row_offsets[r + 1], eb = other.row_offsets[r + 1];
        while (ka < ea || kb < eb) {
            int c;
            double v = 0.0;
            if (kb >= eb || (ka < ea && col_indices[ka] <= other.col_indices[kb])) {
                c = col_indices[ka];
                v += values[ka++];
                if (kb < eb && other.col_indices[kb] == c) v += s * other.values[kb++];
            } else {
                c = other.col_indices[kb];
                v += s * other.values[kb++];
            }
            m.col_indices.push_back(c);
            m.values.push_back(v);
            ++m.row_offsets[r + 1];
        }
    }
    for (int r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
    return m;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
    Eigen::SparseMatrix<double> m(rows, cols);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(values.size());
    append_triplets(t, 0, 0, 1.0, false);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            m(r, col_indices[k]) += values[k];
    return m;
}

void SparseMatrix::append_triplets(std::vector<Eigen::Triplet<double>>& out, int row_offset,
                                   int col_offset, double scale, bool transpose) const {
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
            const int c = col_indices[k];
            if (transpose)
                out.emplace_back(row_offset + c, col_offset + r, scale * values[k]);
            else
                out.emplace_back(row_offset + r, col_offset + c, scale * values[k]);
        }
}

BlockSystem::BlockSystem(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
    offsets_.resize(dims_.size());
    for (size_t i = 0; i < dims_.size(); ++i) {
        offsets_[i] = dim_;
        dim_ += dims_[i];
    }
    constrained_.assign(dims_.size(), nullptr);
    rhs_ = Eigen::VectorXd::Zero(dim_);
}

void BlockSystem::add_block(int bi, int bj, double scale, const SparseMatrix* mat, bool transpose) {
    const int r = transpose ? mat->cols : mat->rows;
    const int c = transpose ? mat->rows : mat->cols;
    if (r != dims_[bi] || c != dims_[bj])
        throw std::invalid_argument("BlockSystem::add_block: block shape mismatch");
    entries_.push_back({bi, bj, scale, mat, transpose});
}

void BlockSystem::set_constrained(int bi, const std::vector<char>* mask) {
    if (mask && static_cast<int>(mask->size()) != dims_[bi])
        throw std::invalid_argument("BlockSystem::set_constrained: mask size mismatch");
    constrained_[bi] = mask;
}

void BlockSystem::set_rhs(const Eigen::VectorXd& rhs) {
    if (rhs.size() != dim_) throw std::invalid_argument("BlockSystem::set_rhs: size mismatch");
    rhs_ = rhs;
}

Eigen::SparseMatrix<double> BlockSystem::assemble() const {
    std::vector<Eigen::Triplet<double>> t;
    size_t cap = 0;
    for (const Entry& e : entries_) cap += e.mat->values.size();
    t.reserve(cap + dim_);

    for (const Entry& e : entries_) {
        const std::vector<char>* rmask = constrained_[e.bi];
        const std::vector<char>* cmask = constrained_[e.bj];
        const SparseMatrix& m = *e.mat;
        for (int r = 0; r < m.rows; ++r)
            for (int k = m.row_offsets[r]; k < m.row_offsets[r + 1]; ++k) {
                const int c = m.col_indices[k];
                const int br = e.transpose ? c : r;
                const int bc = e.transpose ? r : c;
                if (rmask && (*rmask)[br]) continue;
                if (cmask && (*cmask)[bc]) continue;
                t.emplace_back(offsets_[e.bi] + br, offsets_[e.bj] + bc, e.scale * m.values[k]);
            }
    }
    for (size_t b = 0; b < dims_.size(); ++b) {
        if (!constrained_[b]) continue;
        for (int i = 0; i < dims_[b]; ++i)
            if ((*constrained_[b])[i]) t.emplace_back(offsets_[b] + i, offsets_[b] + i, 1.0);
    }

    Eigen::SparseMatrix<double> A(dim_, dim_);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    return A;
}

Eigen::VectorXd BlockSystem::constrained_rhs() const {
    Eigen::VectorXd b = rhs_;
    for (size_t bi = 0; bi < dims_.size(); ++bi) {
        if (!constrained_[bi]) continue;
        for (int i = 0; i < dims_[bi]; ++i)
            if ((*constrained_[bi])[i]) b[offsets_[bi] + i] = 0.0;
    }
    return b;
}

} // namespace nsfem
