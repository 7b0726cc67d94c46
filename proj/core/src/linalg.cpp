#include "resgames/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

namespace resgames {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw DimensionError(what);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("ComplexMatrix: entry count does not equal rows * cols");
}

ComplexMatrix ComplexMatrix::identity(std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "ComplexMatrix +: shape mismatch");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "ComplexMatrix -: shape mismatch");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "ComplexMatrix *: inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexMatrix operator*(cplx scale, const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = scale * a.data()[i];
    return out;
}

ComplexMatrix operator*(double scale, const ComplexMatrix& a) { return cplx(scale, 0.0) * a; }

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

cplx trace(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), "trace: matrix not square");
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs_entry(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& v : a.data()) s = std::max(s, std::abs(v));
    return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const cplx aij = a(i1, j1);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = aij * b(i2, j2);
        }
    return out;
}

namespace {

ComplexMatrix symmetrize(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
        out(i, i) = cplx(out(i, i).real(), 0.0);
    }
    return out;
}

double asymmetry(const ComplexMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("HermitianOperator: matrix must be square and non-empty");
    const double asym = asymmetry(m);
    if (asym > 1e-6)
        throw ValidationError("HermitianOperator: input is not Hermitian (asymmetry " +
                              std::to_string(asym) + ")");
    if (asym > 1e-9)
        std::fprintf(stderr,
                     "resgames: warning: symmetrizing operator with asymmetry %.3e\n", asym);
    mat_ = symmetrize(m);
}

HermitianOperator HermitianOperator::trusted(ComplexMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("HermitianOperator: matrix must be square and non-empty");
    HermitianOperator h;
    h.mat_ = symmetrize(m);
    return h;
}

HermitianOperator HermitianOperator::identity(std::size_t d) {
    return trusted(ComplexMatrix::identity(d));
}

HermitianOperator HermitianOperator::zero(std::size_t d) {
    return trusted(ComplexMatrix(d, d));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return trusted(std::move(m));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator::trusted(a.matrix() + b.matrix());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator::trusted(a.matrix() - b.matrix());
}

HermitianOperator operator*(double scale, const HermitianOperator& a) {
    return HermitianOperator::trusted(scale * a.matrix());
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RealMatrix RealMatrix::identity(std::size_t d) {
    RealMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> RealMatrix::apply(const std::vector<double>& x) const {
    require(x.size() == cols_, "RealMatrix::apply: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* row = data_.data() + i * cols_;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<double> RealMatrix::apply_transpose(const std::vector<double>& x) const {
    require(x.size() == rows_, "RealMatrix::apply_transpose: size mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) y[j] += row[j] * xi;
    }
    return y;
}

RealEigResult jacobi_eig_symmetric(const RealMatrix& s, int max_sweeps) {
    require(s.rows() == s.cols(), "jacobi_eig_symmetric: matrix not square");
    const std::size_t n = s.rows();
    RealMatrix a = s;
    // Work on the exactly symmetric part; callers pass symmetric data but
    // rounding in their assembly must not leak into the rotations.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }
    RealMatrix v = RealMatrix::identity(n);

    double frob = 0.0;
    for (double x : a.data()) frob += x * x;
    frob = std::sqrt(frob);
    const double off_target = 1e-14 * std::max(1.0, frob);

    auto off_norm = [&]() {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) acc += a(i, j) * a(i, j);
        return std::sqrt(2.0 * acc);
    };

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= off_target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                // A <- G^T A G with G the (p,q) rotation [[c, s], [-s, c]].
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm() > off_target)
        throw ConvergenceError("jacobi_eig_symmetric: off-diagonal mass did not collapse", sweep);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    RealEigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = RealMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    out.sweeps = sweep;
    return out;
}

EigResult hermitian_eig(const HermitianOperator& h) {
    const std::size_t d = h.dim();
    // Real symmetric embedding E = [[Re H, -Im H], [Im H, Re H]]; each
    // eigenvalue of H appears twice, and a real eigenvector (u; w) of E maps
    // to the complex eigenvector u + i w of H.
    RealMatrix e(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const cplx hij = h(i, j);
            e(i, j) = hij.real();
            e(i, d + j) = -hij.imag();
            e(d + i, j) = hij.imag();
            e(d + i, d + j) = hij.real();
        }
    }
    RealEigResult re = jacobi_eig_symmetric(e);

    struct Candidate {
        double eigenvalue;
        std::vector<cplx> vec;
        bool used = false;
    };
    std::vector<Candidate> cands(2 * d);
    for (std::size_t k = 0; k < 2 * d; ++k) {
        cands[k].eigenvalue = re.eigenvalues[k];
        cands[k].vec.resize(d);
        for (std::size_t i = 0; i < d; ++i)
            cands[k].vec[i] = cplx(re.eigenvectors(i, k), re.eigenvectors(d + i, k));
    }

    std::vector<std::pair<double, std::vector<cplx>>> accepted;
    accepted.reserve(d);

    auto project_out_accepted = [&](std::vector<cplx>& z) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& [unused_lambda, v] : accepted) {
                (void)unused_lambda;
                cplx overlap(0.0, 0.0);
                for (std::size_t i = 0; i < d; ++i) overlap += std::conj(v[i]) * z[i];
                for (std::size_t i = 0; i < d; ++i) z[i] -= overlap * v[i];
            }
        }
    };
    auto norm2 = [&](const std::vector<cplx>& z) {
        double acc = 0.0;
        for (const cplx& x : z) acc += std::norm(x);
        return acc;
    };

    // The two real eigenvectors of a simple eigenvalue map to z and (up to
    // phase) i z; sequential Gram-Schmidt keeps one of each pair. A greedy
    // pivoted recovery pass guards degenerate clusters, where candidate
    // residuals can be split more evenly.
    for (auto& cand : cands) {
        if (accepted.size() == d) break;
        std::vector<cplx> z = cand.vec;
        project_out_accepted(z);
        const double n2 = norm2(z);
        if (n2 > 0.25) {
            const double inv = 1.0 / std::sqrt(n2);
            for (cplx& x : z) x *= inv;
            accepted.emplace_back(cand.eigenvalue, std::move(z));
            cand.used = true;
        }
    }
    while (accepted.size() < d) {
        double best = -1.0;
        std::size_t best_idx = 0;
        std::vector<cplx> best_vec;
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (cands[k].used) continue;
            std::vector<cplx> z = cands[k].vec;
            project_out_accepted(z);
            const double n2 = norm2(z);
            if (n2 > best) {
                best = n2;
                best_idx = k;
                best_vec = std::move(z);
            }
        }
        if (best <= 1e-24)
            throw SolverError("hermitian_eig: failed to extract a full eigenbasis");
        const double inv = 1.0 / std::sqrt(best);
        for (cplx& x : best_vec) x *= inv;
        accepted.emplace_back(cands[best_idx].eigenvalue, std::move(best_vec));
        cands[best_idx].used = true;
    }

    std::stable_sort(accepted.begin(), accepted.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    EigResult out;
    out.eigenvalues.resize(d);
    out.eigenvectors = ComplexMatrix(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        out.eigenvalues[k] = accepted[k].first;
        for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, k) = accepted[k].second[i];
    }
    out.sweeps = re.sweeps;
    return out;
}

double operator_norm(const HermitianOperator& h) {
    const EigResult e = hermitian_eig(h);
    return std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
}

double min_eigenvalue(const HermitianOperator& h) { return hermitian_eig(h).eigenvalues.back(); }

double max_eigenvalue(const HermitianOperator& h) { return hermitian_eig(h).eigenvalues.front(); }

bool is_psd(const HermitianOperator& h, double tol) { return min_eigenvalue(h) >= -tol; }

double trace_inner(const HermitianOperator& a, const HermitianOperator& b) {
    require(a.dim() == b.dim(), "trace_inner: dimension mismatch");
    // tr[AB] = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
    double acc = 0.0;
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const cplx& x = a(i, j);
            const cplx& y = b(i, j);
            acc += x.real() * y.real() + x.imag() * y.imag();
        }
    return acc;
}

HermitianOperator partial_trace(const HermitianOperator& m, std::size_t dim_first,
                                std::size_t dim_second, Subsystem traced) {
    if (dim_first * dim_second != m.dim())
        throw DimensionError("partial_trace: dimension does not factor as requested");
    if (traced == Subsystem::Second) {
        ComplexMatrix out(dim_first, dim_first);
        for (std::size_t a = 0; a < dim_first; ++a)
            for (std::size_t ap = 0; ap < dim_first; ++ap) {
                cplx acc(0.0, 0.0);
                for (std::size_t b = 0; b < dim_second; ++b)
                    acc += m(a * dim_second + b, ap * dim_second + b);
                out(a, ap) = acc;
            }
        return HermitianOperator::trusted(std::move(out));
    }
    ComplexMatrix out(dim_second, dim_second);
    for (std::size_t b = 0; b < dim_second; ++b)
        for (std::size_t bp = 0; bp < dim_second; ++bp) {
            cplx acc(0.0, 0.0);
            for (std::size_t a = 0; a < dim_first; ++a)
                acc += m(a * dim_second + b, a * dim_second + bp);
            out(b, bp) = acc;
        }
    return HermitianOperator::trusted(std::move(out));
}

namespace {

HermitianOperator rebuild_from_eig(const EigResult& e, const std::vector<double>& lambda) {
    const std::size_t d = lambda.size();
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < d; ++k)
                acc += e.eigenvectors(i, k) * lambda[k] * std::conj(e.eigenvectors(j, k));
            out(i, j) = acc;
        }
    return HermitianOperator::trusted(std::move(out));
}

}  // namespace

HermitianOperator herm_sqrt(const HermitianOperator& h) {
    EigResult e = hermitian_eig(h);
    std::vector<double> lambda(h.dim());
    for (std::size_t k = 0; k < h.dim(); ++k) lambda[k] = std::sqrt(std::max(0.0, e.eigenvalues[k]));
    return rebuild_from_eig(e, lambda);
}

HermitianOperator herm_inv_sqrt(const HermitianOperator& h, double floor) {
    EigResult e = hermitian_eig(h);
    std::vector<double> lambda(h.dim());
    for (std::size_t k = 0; k < h.dim(); ++k) {
        if (e.eigenvalues[k] <= floor)
            throw SolverError("herm_inv_sqrt: operator is not safely positive definite");
        lambda[k] = 1.0 / std::sqrt(e.eigenvalues[k]);
    }
    return rebuild_from_eig(e, lambda);
}

RealMatrix cholesky(const RealMatrix& m, double floor) {
    require(m.rows() == m.cols(), "cholesky: matrix not square");
    const std::size_t n = m.rows();
    RealMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = m(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (diag <= floor) throw SolverError("cholesky: non-positive pivot");
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const RealMatrix& lower, const std::vector<double>& rhs) {
    const std::size_t n = lower.rows();
    require(rhs.size() == n, "cholesky_solve: size mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs[i];
        for (std::size_t k = 0; k < i; ++k) acc -= lower(i, k) * y[k];
        y[i] = acc / lower(i, i);
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= lower(k, ii) * x[k];
        x[ii] = acc / lower(ii, ii);
    }
    return x;
}

}  // namespace resgames
