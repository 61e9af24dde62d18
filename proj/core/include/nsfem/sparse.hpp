#pragma once

// Compressed-row sparse storage and the block composition used for the
// saddle-point systems. Column indices are strictly ascending within each row;
// explicit zeros are permitted.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace nsfem {

struct Triplet {
    int row;
    int col;
    double value;
};

class SparseMatrix {
public:
    int rows = 0;
    int cols = 0;
    std::vector<int> row_offsets;   // size rows+1
    std::vector<int> col_indices;   // ascending per row
    std::vector<double> values;

    SparseMatrix() = default;
    SparseMatrix(int r, int c) : rows(r), cols(c), row_offsets(static_cast<size_t>(r) + 1, 0) {}

    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int nnz() const { return static_cast<int>(values.size()); }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::VectorXd apply_transposed(const Eigen::VectorXd& x) const;

    SparseMatrix scaled(double s) const;
    // Entrywise this + s*other (patterns merged).
    SparseMatrix plus(const SparseMatrix& other, double s = 1.0) const;

    Eigen::SparseMatrix<double> to_eigen() const;
    Eigen::MatrixXd to_dense() const;

    void append_triplets(std::vector<Eigen::Triplet<double>>& out, int row_offset, int col_offset,
                         double scale, bool transpose) const;
};

// Sparse blocks tiling a square system plus a right-hand side. Constrained
// (essential) dofs of a block are eliminated symmetrically: their rows and
// columns are dropped and a unit diagonal is placed instead.
class BlockSystem {
public:
    explicit BlockSystem(std::vector<int> block_dims);

    // scale * M (or M^T) added at block position (bi, bj). The matrix must
    // outlive the system.
    void add_block(int bi, int bj, double scale, const SparseMatrix* mat, bool transpose = false);
    // Mask of constrained dofs within block bi (applies to its rows and columns).
    void set_constrained(int bi, const std::vector<char>* mask);

    void set_rhs(const Eigen::VectorXd& rhs);
    Eigen::VectorXd& rhs() { return rhs_; }

    int dim() const { return dim_; }
    int block_offset(int bi) const { return offsets_[bi]; }
    int block_dim(int bi) const { return dims_[bi]; }

    // Global matrix with constraints applied; rhs entries of constrained dofs
    // are zeroed by assemble time (homogeneous constraints only).
    Eigen::SparseMatrix<double> assemble() const;
    Eigen::VectorXd constrained_rhs() const;

private:
    struct Entry {
        int bi, bj;
        double scale;
        const SparseMatrix* mat;
        bool transpose;
    };
    std::vector<int> dims_;
    std::vector<int> offsets_;
    std::vector<Entry> entries_;
    std::vector<const std::vector<char>*> constrained_;
    Eigen::VectorXd rhs_;
    int dim_ = 0;
};

} // namespace nsfem
