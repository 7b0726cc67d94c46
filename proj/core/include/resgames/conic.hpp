#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "resgames/errors.hpp"
#include "resgames/linalg.hpp"

namespace resgames {

// One factor of the product cone: either the complex Hermitian PSD matrices
// of dimension `size` (contributing size^2 real scalars through svec) or the
// nonnegative orthant with `size` entries.
struct ConeBlock {
    enum class Kind { Psd, NonNeg };
    Kind kind = Kind::NonNeg;
    std::size_t size = 0;
};

ConeBlock psd_block(std::size_t dim);
ConeBlock nonneg_block(std::size_t count);

struct ConeSpec {
    std::vector<ConeBlock> blocks;

    // Total number of real scalars carried by one cone element.
    std::size_t scalar_dim() const;
    // Degree of the log barrier: sum of matrix dimensions plus orthant sizes.
    double barrier_degree() const;
};

// Isometric real coordinates for a Hermitian d x d matrix, length d^2:
// [diagonal (d); sqrt(2) Re of strict upper triangle, row-major; sqrt(2) Im
// of strict upper triangle, row-major]. The Euclidean inner product of two
// coordinate vectors equals trace_inner of the matrices, so PSD blocks stay
// self-dual in coordinates and no weight bookkeeping leaks into the solver.
std::vector<double> svec(const HermitianOperator& h);
HermitianOperator unsvec(const std::vector<double>& v, std::size_t dim);

// minimize c.x  subject to  A x = b,  x in cone.
struct ConicProgram {
    ConeSpec cone;
    std::vector<double> c;
    RealMatrix a;
    std::vector<double> b;
};

enum class SolveStatus {
    Optimal,
    Infeasible,    // y (and s) hold a Farkas certificate: A^T y + s = 0, s in cone, b.y = 1
    Unbounded,     // x holds an improving ray: A x = 0, x in cone, c.x = -1
    MaxIterations  // budget exhausted or progress stalled; best iterate returned
};

struct Solution {
    SolveStatus status = SolveStatus::MaxIterations;
    std::vector<double> x;  // primal point (de-homogenized), or the ray when Unbounded
    std::vector<double> y;  // dual multipliers on the rows of A (certificate when Infeasible)
    std::vector<double> s;  // dual slack c - A^T y
    double primal_value = 0.0;  // meaningful on Optimal / MaxIterations
    double dual_value = 0.0;
    double gap = 0.0;  // |primal_value - dual_value|
    int iterations = 0;
    // Indices of equality rows dropped by presolve as linear combinations of
    // earlier rows; y carries zeros there.
    std::vector<std::size_t> dropped_rows;
};

struct SolveSettings {
    double tol_gap = 1e-9;
    double tol_feas = 1e-9;
    int max_iters = 200;
    // Optional warm start for the primal point; eigenvalues are floored at
    // 0.1 to restart from a safely interior point. Used for self-checks.
    std::vector<double> warm_x;
};

// Primal-dual path-following interior-point solve (Nesterov-Todd scaling,
// homogeneous self-dual embedding, Mehrotra predictor-corrector). Throws
// DimensionError on malformed programs and SolverError on numerical
// breakdown; an exhausted iteration budget is reported through the status
// instead.
Solution solve(const ConicProgram& prog, const SolveSettings& settings = {});

struct VerifyReport {
    double primal_residual = 0.0;       // ||A x - b||_2 / (1 + ||b||_2)
    double dual_residual = 0.0;         // ||A^T y + s - c||_2 / (1 + ||c||_2)
    double primal_cone_violation = 0.0; // worst eigenvalue / entry shortfall of x
    double dual_cone_violation = 0.0;   // same for s
    double primal_value = 0.0;
    double dual_value = 0.0;
    double gap = 0.0;             // |primal_value - dual_value|
    double complementarity = 0.0; // |x.s|
    bool primal_ok = false;
    bool dual_ok = false;
    bool gap_ok = false;
    bool pass = false;
};

// Recomputes all optimality residuals of (prog, sol) from scratch. pass
// requires feasibility and cone residuals at or below tol and the duality
// gap at or below tol * max(1, |primal_value|).
VerifyReport verify_solution(const ConicProgram& prog, const Solution& sol, double tol);

// Debug dump of a program (cone block list, c, A, b as arrays of doubles).
std::string program_to_json(const ConicProgram& prog);
void dump_program(const ConicProgram& prog, const std::string& path);

// Assembles standard-form programs from matrix-valued variables and
// constraints, and maps solver vectors back to operators. Variables and
// constraints are identified by the handles returned at creation; build()
// lays out columns and rows in creation order, so extraction helpers can be
// used against any Solution of the built program.
class ProgramBuilder {
public:
    // Variables.
    std::size_t add_psd_var(std::size_t dim);
    std::size_t add_nonneg_var(std::size_t count);

    // Objective: minimize accumulated terms.
    void add_objective_term(std::size_t var, const HermitianOperator& coeff);  // + tr[coeff X]
    void add_objective_term(std::size_t var, std::size_t index, double coeff); // + coeff x_i

    // Matrix equality constraint: sum of registered terms == rhs (Hermitian,
    // d x d), contributing d^2 rows.
    std::size_t add_matrix_constraint(const HermitianOperator& rhs);
    // + coeff * X for a PSD variable of the same dimension.
    void add_matrix_term(std::size_t constraint, std::size_t var, double coeff);
    // + x_i * coeff for entry i of a nonnegative variable.
    void add_matrix_term(std::size_t constraint, std::size_t var, std::size_t index,
                         const HermitianOperator& coeff);

    // Scalar equality constraint: sum of registered terms == rhs (one row).
    std::size_t add_scalar_constraint(double rhs);
    void add_scalar_term(std::size_t constraint, std::size_t var,
                         const HermitianOperator& coeff);  // + tr[coeff X]
    void add_scalar_term(std::size_t constraint, std::size_t var, std::size_t index,
                         double coeff);  // + coeff x_i

    ConicProgram build() const;

    // Layout queries and solution extraction.
    std::size_t var_offset(std::size_t var) const;
    std::size_t constraint_offset(std::size_t constraint) const;
    HermitianOperator psd_value(const std::vector<double>& x, std::size_t var) const;
    double scalar_value(const std::vector<double>& x, std::size_t var, std::size_t index) const;
    // Dual multipliers of a matrix constraint, reassembled as an operator;
    // pairs with the constraint's rhs under trace_inner.
    HermitianOperator matrix_dual(const std::vector<double>& y, std::size_t constraint) const;
    double scalar_dual(const std::vector<double>& y, std::size_t constraint) const;

private:
    struct Var {
        ConeBlock::Kind kind;
        std::size_t size;    // dim (Psd) or count (NonNeg)
        std::size_t offset;  // first scalar column
    };
    struct MatrixPsdTerm {
        std::size_t var;
        double coeff;
    };
    struct MatrixScalarTerm {
        std::size_t var;
        std::size_t index;
        std::vector<double> coeff_svec;
    };
    struct ScalarPsdTerm {
        std::size_t var;
        std::vector<double> coeff_svec;
    };
    struct ScalarScalarTerm {
        std::size_t var;
        std::size_t index;
        double coeff;
    };
    struct Constraint {
        bool matrix;
        std::size_t dim;     // matrix dim, or 1 for scalar rows
        std::size_t offset;  // first row
        std::vector<double> rhs;
        std::vector<MatrixPsdTerm> m_psd;
        std::vector<MatrixScalarTerm> m_scalar;
        std::vector<ScalarPsdTerm> s_psd;
        std::vector<ScalarScalarTerm> s_scalar;
    };

    const Var& var_at(std::size_t var) const;
    const Constraint& constraint_at(std::size_t constraint) const;

    std::vector<Var> vars_;
    std::vector<Constraint> constraints_;
    std::vector<std::pair<std::size_t, std::vector<double>>> obj_psd_;  // var, svec coeff
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> obj_scalar_;
    std::size_t cols_ = 0;
    std::size_t rows_ = 0;
};

}  // namespace resgames
