#include "nsfem/linear_solver.hpp"

namespace nsfem {

DirectSolver::DirectSolver() {
#ifdef NSFEM_HAVE_UMFPACK
    // The contract applies one refinement step itself.
    lu_.umfpackControl()[UMFPACK_IRSTEP] = 0;
    // All systems here are structurally symmetric (mass and saddle blocks);
    // the symmetric strategy roughly halves fill and factors with far smaller
    // backward error than the automatic choice.
    lu_.umfpackControl()[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
#endif
}

void DirectSolver::factorize(const Eigen::SparseMatrix<double>& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("DirectSolver: matrix not square");
    matrix_ = A;
    matrix_.makeCompressed();

    if (!analyzed_ || pattern_rows_ != matrix_.rows() || pattern_nnz_ != matrix_.nonZeros()) {
        lu_.analyzePattern(matrix_);
        analyzed_ = true;
        pattern_rows_ = static_cast<int>(matrix_.rows());
        pattern_nnz_ = static_cast<int>(matrix_.nonZeros());
    }
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success) {
        factorized_ = false;
        throw SolveError("DirectSolver: factorization failed (singular or rank-deficient matrix)", 0.0);
    }
    factorized_ = true;
}

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b, double tol) const {
    if (!factorized_) throw std::logic_error("DirectSolver::solve before factorize");
    if (b.size() != matrix_.rows()) throw std::invalid_argument("DirectSolver::solve: rhs size mismatch");

    Eigen::VectorXd x = lu_.solve(b);
    // One refinement step keeps the residual near machine precision even for
    // ill-conditioned saddle points.
    Eigen::VectorXd r = b - matrix_ * x;
    x += lu_.solve(r);
    r = b - matrix_ * x;

    const double bnorm = b.norm();
    const double rel = (bnorm > 0.0) ? r.norm() / bnorm : r.norm();
    if (!(rel <= tol))
        throw SolveError("DirectSolver: residual contract violated", rel);
    return x;
}

Eigen::VectorXd solve(const BlockSystem& system, double tol) {
    DirectSolver s;
    s.factorize(system.assemble());
    return s.solve(system.constrained_rhs(), tol);
}

} // namespace nsfem
