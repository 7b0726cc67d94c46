#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "resgames/errors.hpp"

namespace resgames {

using cplx = std::complex<double>;

// Dense complex matrix, row-major storage. Dimensions are fixed at
// construction; entries are mutable.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx scale, const ComplexMatrix& a);
ComplexMatrix operator*(double scale, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs_entry(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Complex d x d self-adjoint matrix. Construction symmetrizes the input as
// (M + M^dagger)/2; asymmetry above 1e-9 produces a warning on stderr and
// asymmetry above 1e-6 is rejected. The trusted() path symmetrizes silently
// and is meant for matrices produced by the library itself, where asymmetry
// can only be floating-point noise.
class HermitianOperator {
public:
    explicit HermitianOperator(const ComplexMatrix& m);

    static HermitianOperator trusted(ComplexMatrix m);
    static HermitianOperator identity(std::size_t d);
    static HermitianOperator zero(std::size_t d);
    static HermitianOperator diagonal(const std::vector<double>& diag);

    std::size_t dim() const { return mat_.rows(); }
    const ComplexMatrix& matrix() const { return mat_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

private:
    HermitianOperator() = default;
    ComplexMatrix mat_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double scale, const HermitianOperator& a);

struct EigResult {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // unitary, column k pairs with eigenvalue k
    int sweeps = 0;                   // Jacobi sweeps used
};

// Full eigendecomposition of a Hermitian operator: H = V diag(lambda) V^dagger
// with eigenvalues sorted descending. Implemented with cyclic Jacobi sweeps on
// the 2d x 2d real symmetric embedding of H.
EigResult hermitian_eig(const HermitianOperator& h);

// max_i |lambda_i(h)| == max over states rho of |tr[h rho]|.
double operator_norm(const HermitianOperator& h);

double min_eigenvalue(const HermitianOperator& h);
double max_eigenvalue(const HermitianOperator& h);

// true iff lambda_min(h) >= -tol.
bool is_psd(const HermitianOperator& h, double tol = 1e-9);

// tr[a b]; real and symmetric for Hermitian arguments.
double trace_inner(const HermitianOperator& a, const HermitianOperator& b);

enum class Subsystem { First, Second };

// Partial trace of an operator on a tensor product of dim_first x dim_second,
// removing the named factor. Basis convention: row index = i_first *
// dim_second + i_second.
HermitianOperator partial_trace(const HermitianOperator& m, std::size_t dim_first,
                                std::size_t dim_second, Subsystem traced);

// Operator square root / inverse square root through the eigendecomposition.
// herm_sqrt clips eigenvalues at zero (inputs are PSD up to noise);
// herm_inv_sqrt requires eigenvalues above `floor` and throws SolverError
// otherwise.
HermitianOperator herm_sqrt(const HermitianOperator& h);
HermitianOperator herm_inv_sqrt(const HermitianOperator& h, double floor = 1e-14);

// Dense real matrix, row-major.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols);

    static RealMatrix identity(std::size_t d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    // y = this * x
    std::vector<double> apply(const std::vector<double>& x) const;
    // y = this^T * x
    std::vector<double> apply_transpose(const std::vector<double>& x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct RealEigResult {
    std::vector<double> eigenvalues;  // descending
    RealMatrix eigenvectors;          // orthogonal, columns
    int sweeps = 0;
};

// Cyclic Jacobi eigensolver for dense real symmetric matrices. Throws
// ConvergenceError if the off-diagonal mass has not collapsed after
// max_sweeps sweeps.
RealEigResult jacobi_eig_symmetric(const RealMatrix& s, int max_sweeps = 100);

// Cholesky factorization m = L L^T of a symmetric positive definite matrix
// (lower factor returned). Throws SolverError if a pivot drops below `floor`.
RealMatrix cholesky(const RealMatrix& m, double floor = 0.0);

// Solves L L^T x = rhs given the lower Cholesky factor L.
std::vector<double> cholesky_solve(const RealMatrix& lower, const std::vector<double>& rhs);

}  // namespace resgames
