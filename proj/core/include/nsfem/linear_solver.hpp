#pragma once

// Sparse direct solves with an enforced residual contract. Saddle points are
// indefinite, so the path is an LU factorization with partial pivoting and a
// fill-reducing ordering (UMFPACK when available, Eigen SparseLU otherwise);
// one step of iterative refinement is applied before the contract is checked.

#include "nsfem/sparse.hpp"

#include <Eigen/Sparse>
#ifdef NSFEM_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

#include <memory>
#include <stdexcept>

namespace nsfem {

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double residual)
        : std::runtime_error(what), achieved_residual(residual) {}
    double achieved_residual = 0.0;
};

// Cached factorization; reuses the symbolic analysis when refactorizing a
// matrix with the identical sparsity pattern.
class DirectSolver {
public:
    DirectSolver();

    void factorize(const Eigen::SparseMatrix<double>& A);
    bool factorized() const { return factorized_; }

    // Solves to a relative residual of tol (default 1e-10); throws SolveError
    // carrying the achieved residual otherwise.
    Eigen::VectorXd solve(const Eigen::VectorXd& b, double tol = 1e-10) const;

private:
    Eigen::SparseMatrix<double> matrix_;
#ifdef NSFEM_HAVE_UMFPACK
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu_;
#else
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
#endif
    bool analyzed_ = false;
    bool factorized_ = false;
    int pattern_rows_ = -1;
    int pattern_nnz_ = -1;
};

// One-shot solve of an assembled block system.
Eigen::VectorXd solve(const BlockSystem& system, double tol = 1e-10);

} // namespace nsfem
