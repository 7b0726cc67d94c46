#include "resgames/conic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include <json.hpp>

namespace resgames {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Small dense-vector helpers.

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double nrm_inf(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> scaled(const std::vector<double>& x, double alpha) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
    return y;
}

bool all_finite(const std::vector<double>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// svec plumbing on raw storage.

std::size_t offpair_count(std::size_t d) { return d * (d - 1) / 2; }

void svec_raw(const ComplexMatrix& m, std::size_t d, double* out) {
    for (std::size_t i = 0; i < d; ++i) out[i] = m(i, i).real();
    std::size_t idx = d;
    const std::size_t p = offpair_count(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            out[idx] = kSqrt2 * v.real();
            out[idx + p] = kSqrt2 * v.imag();
            ++idx;
        }
}

ComplexMatrix unsvec_raw(const double* v, std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = v[i];
    std::size_t idx = d;
    const std::size_t p = offpair_count(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const cplx e(v[idx] / kSqrt2, v[idx + p] / kSqrt2);
            m(i, j) = e;
            m(j, i) = std::conj(e);
            ++idx;
        }
    return m;
}

// ---------------------------------------------------------------------------
// Hermitian matrix utilities on ComplexMatrix (library-internal values, so the
// trusted ingestion path is appropriate).

EigResult ceig(const ComplexMatrix& m) { return hermitian_eig(HermitianOperator::trusted(m)); }

template <typename Fn>
ComplexMatrix rebuild(const EigResult& e, Fn&& f) {
    const std::size_t d = e.eigenvalues.size();
    ComplexMatrix out(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double fk = f(e.eigenvalues[k]);
        if (fk == 0.0) continue;
        for (std::size_t i = 0; i < d; ++i) {
            const cplx vik = fk * e.eigenvectors(i, k);
            for (std::size_t j = 0; j < d; ++j)
                out(i, j) += vik * std::conj(e.eigenvectors(j, k));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cone views.

struct BlockView {
    ConeBlock::Kind kind;
    std::size_t size;  // matrix dim or entry count
    std::size_t off;   // first scalar index
    std::size_t len;   // scalar span
};

std::vector<BlockView> make_views(const ConeSpec& cone) {
    std::vector<BlockView> views;
    std::size_t off = 0;
    for (const ConeBlock& blk : cone.blocks) {
        const std::size_t len =
            blk.kind == ConeBlock::Kind::Psd ? blk.size * blk.size : blk.size;
        views.push_back({blk.kind, blk.size, off, len});
        off += len;
    }
    return views;
}

std::vector<double> cone_identity(const std::vector<BlockView>& views, std::size_t n) {
    std::vector<double> e(n, 0.0);
    for (const BlockView& v : views) {
        if (v.kind == ConeBlock::Kind::Psd) {
            for (std::size_t i = 0; i < v.size; ++i) e[v.off + i] = 1.0;
        } else {
            for (std::size_t i = 0; i < v.size; ++i) e[v.off + i] = 1.0;
        }
    }
    return e;
}

// Worst cone violation (most negative eigenvalue / entry) of a point.
double cone_violation(const std::vector<BlockView>& views, const std::vector<double>& x) {
    double worst = 0.0;
    for (const BlockView& v : views) {
        if (v.kind == ConeBlock::Kind::Psd) {
            const ComplexMatrix m = unsvec_raw(x.data() + v.off, v.size);
            worst = std::max(worst, -min_eigenvalue(HermitianOperator::trusted(m)));
        } else {
            for (std::size_t i = 0; i < v.size; ++i) worst = std::max(worst, -x[v.off + i]);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Presolve: drop equality rows that are linear combinations of earlier rows,
// with expansion tracking so an inconsistent dependent row yields a Farkas
// certificate y (A^T y = 0, b.y = 1) over the original rows.

struct Presolved {
    bool infeasible = false;
    std::vector<double> farkas;  // full-length y when infeasible
    std::vector<std::size_t> kept;
    std::vector<std::size_t> dropped;
};

Presolved presolve(const RealMatrix& a, const std::vector<double>& b) {
    Presolved out;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const double bmax = b.empty() ? 0.0 : nrm_inf(b);

    std::vector<std::vector<double>> q;       // orthonormal basis of kept rows
    std::vector<std::vector<double>> expand;  // q[k] = sum_j expand[k][j] * row_j
    for (std::size_t r = 0; r < m; ++r) {
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = a(r, j);
        const double row_norm = nrm2(v);

        std::vector<double> coeff(q.size(), 0.0);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < q.size(); ++k) {
                const double c = dot(q[k], v);
                coeff[k] += c;
                axpy(-c, q[k], v);
            }
        }
        const double res_norm = nrm2(v);
        if (res_norm <= 1e-11 * std::max(1.0, row_norm)) {
            // Dependent: row_r = sum_k coeff_k q_k = sum_j lambda_j row_j.
            std::vector<double> lambda(m, 0.0);
            for (std::size_t k = 0; k < q.size(); ++k) axpy(coeff[k], expand[k], lambda);
            double b_resid = b[r];
            for (std::size_t j = 0; j < m; ++j) b_resid -= lambda[j] * b[j];
            if (std::abs(b_resid) > 1e-9 * std::max(1.0, bmax)) {
                std::vector<double> y(m, 0.0);
                for (std::size_t j = 0; j < m; ++j) y[j] = -lambda[j];
                y[r] += 1.0;
                const double scale = 1.0 / b_resid;  // b.y = b_resid before scaling
                for (double& e : y) e *= scale;
                out.infeasible = true;
                out.farkas = std::move(y);
                return out;
            }
            out.dropped.push_back(r);
            continue;
        }
        std::vector<double> qv = scaled(v, 1.0 / res_norm);
        std::vector<double> ex(m, 0.0);
        ex[r] = 1.0;
        for (std::size_t k = 0; k < q.size(); ++k) axpy(-coeff[k], expand[k], ex);
        for (double& e : ex) e /= res_norm;
        q.push_back(std::move(qv));
        expand.push_back(std::move(ex));
        out.kept.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nesterov-Todd scaling state, one entry per cone block.

struct BlockScale {
    // PSD blocks.
    ComplexMatrix t;     // scaling matrix: T S T = X
    ComplexMatrix w;     // T^{1/2}
    ComplexMatrix winv;  // T^{-1/2}
    ComplexMatrix xih;   // X^{-1/2} (max-step metric for the primal block)
    ComplexMatrix sih;   // S^{-1/2}
    ComplexMatrix q;     // eigenvectors of lambda = W S W
    std::vector<double> d;  // eigenvalues of lambda
    // NonNeg blocks.
    std::vector<double> tn, wn, lam;
};

void check_pd(const EigResult& e, const char* who) {
    if (e.eigenvalues.empty() || e.eigenvalues.back() <= 0.0)
        throw SolverError(std::string(who) + ": iterate left the cone interior");
}

std::vector<BlockScale> compute_scaling(const std::vector<BlockView>& views,
                                        const std::vector<double>& x,
                                        const std::vector<double>& s) {
    std::vector<BlockScale> scales(views.size());
    for (std::size_t bi = 0; bi < views.size(); ++bi) {
        const BlockView& v = views[bi];
        BlockScale& sc = scales[bi];
        if (v.kind == ConeBlock::Kind::Psd) {
            const ComplexMatrix xm = unsvec_raw(x.data() + v.off, v.size);
            const ComplexMatrix sm = unsvec_raw(s.data() + v.off, v.size);
            const EigResult ex = ceig(xm);
            check_pd(ex, "nt scaling (primal block)");
            const ComplexMatrix xh = rebuild(ex, [](double l) { return std::sqrt(l); });
            sc.xih = rebuild(ex, [](double l) { return 1.0 / std::sqrt(l); });
            const EigResult es = ceig(sm);
            check_pd(es, "nt scaling (dual block)");
            sc.sih = rebuild(es, [](double l) { return 1.0 / std::sqrt(l); });
            const EigResult em = ceig(xh * sm * xh);
            check_pd(em, "nt scaling (geometric mean)");
            const ComplexMatrix mih = rebuild(em, [](double l) { return 1.0 / std::sqrt(l); });
            sc.t = xh * mih * xh;
            const EigResult et = ceig(sc.t);
            check_pd(et, "nt scaling (scaling point)");
            sc.w = rebuild(et, [](double l) { return std::sqrt(l); });
            sc.winv = rebuild(et, [](double l) { return 1.0 / std::sqrt(l); });
            const EigResult el = ceig(sc.w * sm * sc.w);
            check_pd(el, "nt scaling (scaled point)");
            sc.q = el.eigenvectors;
            sc.d = el.eigenvalues;
        } else {
            sc.tn.resize(v.size);
            sc.wn.resize(v.size);
            sc.lam.resize(v.size);
            for (std::size_t i = 0; i < v.size; ++i) {
                const double xi = x[v.off + i];
                const double si = s[v.off + i];
                if (!(xi > 0.0) || !(si > 0.0))
                    throw SolverError("nt scaling: iterate left the cone interior");
                sc.tn[i] = xi / si;
                sc.wn[i] = std::sqrt(xi / si);
                sc.lam[i] = std::sqrt(xi * si);
            }
        }
    }
    return scales;
}

// out = H(in) with H the NT quadratic representation: T V T per PSD block,
// (x_i/s_i) v_i on the orthant.
void apply_h(const std::vector<BlockView>& views, const std::vector<BlockScale>& scales,
             const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t bi = 0; bi < views.size(); ++bi) {
        const BlockView& v = views[bi];
        const BlockScale& sc = scales[bi];
        if (v.kind == ConeBlock::Kind::Psd) {
            const ComplexMatrix m = unsvec_raw(in.data() + v.off, v.size);
            const ComplexMatrix r = sc.t * m * sc.t;
            svec_raw(r, v.size, out.data() + v.off);
        } else {
            for (std::size_t i = 0; i < v.size; ++i) out[v.off + i] = sc.tn[i] * in[v.off + i];
        }
    }
}

std::vector<double> apply_h(const std::vector<BlockView>& views,
                            const std::vector<BlockScale>& scales,
                            const std::vector<double>& in) {
    std::vector<double> out(in.size());
    apply_h(views, scales, in, out);
    return out;
}

// svec coordinates of lambda^2 blockwise (the scaled complementarity value).
std::vector<double> lambda_squared(const std::vector<BlockView>& views,
                                   const std::vector<BlockScale>& scales, std::size_t n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t bi = 0; bi < views.size(); ++bi) {
        const BlockView& v = views[bi];
        const BlockScale& sc = scales[bi];
        if (v.kind == ConeBlock::Kind::Psd) {
            EigResult lam;
            lam.eigenvalues = sc.d;
            lam.eigenvectors = sc.q;
            const ComplexMatrix sq = rebuild(lam, [](double l) { return l * l; });
            svec_raw(sq, v.size, out.data() + v.off);
        } else {
            for (std::size_t i = 0; i < v.size; ++i) out[v.off + i] = sc.lam[i] * sc.lam[i];
        }
    }
    return out;
}

// u = L_lambda^{-1}(dc): solves (lambda u + u lambda)/2 = DC per PSD block in
// lambda's eigenbasis; u_i = dc_i / lambda_i on the orthant.
std::vector<double> lyapunov_solve(const std::vector<BlockView>& views,
                                   const std::vector<BlockScale>& scales,
                                   const std::vector<double>& dc) {
    std::vector<double> out(dc.size(), 0.0);
    for (std::size_t bi = 0; bi < views.size(); ++bi) {
        const BlockView& v = views[bi];
        const BlockScale& sc = scales[bi];
        if (v.kind == ConeBlock::Kind::Psd) {
            const std::size_t d = v.size;
            const ComplexMatrix rm = unsvec_raw(dc.data() + v.off, d);
            const ComplexMatrix rt = adjoint(sc.q) * rm * sc.q;
            ComplexMatrix ut(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    ut(i, j) = 2.0 * rt(i, j) / (sc.d[i] + sc.d[j]);
            const ComplexMatrix u = sc.q * ut * adjoint(sc.q);
            svec_raw(u, d, out.data() + v.off);
        } else {
            for (std::size_t i = 0; i < v.size; ++i) out[v.off + i] = dc[v.off + i] / sc.lam[i];
        }
    }
    return out;
}

// v -> W^{-1} v W^{-1} (down) or W v W (up), blockwise.
std::vector<double> scale_by_w(const std::vector<BlockView>& views,
                               const std::vector<BlockScale>& scales,
                               const std::vector<double>& in, bool down) {
    std::vector<double> out(in.size(), 0.0);
    for (std::size_t bi = 0; bi < views.size(); ++bi) {
        const BlockView& v = views[bi];
        const BlockScale& sc = scales[bi];
        if (v.kind == ConeBlock::Kind::Psd) {
            const ComplexMatrix m = unsvec_raw(in.data() + v.off, v.size);
            const ComplexMatrix& f = down ? sc.winv : sc.w;
            const ComplexMatrix r = f * m * f;
            svec_raw(r, v.size, out.data() + v.off);
        } else {
            for (std::size_t i = 0; i < v.size; ++i)
                out[v.off + i] =
                    down ? in[v.off + i] / sc.wn[i] : in[v.off + i] * sc.wn[i];
        }
    }
    return out;
}

// Largest step keeping point + alpha * dir inside the cone, using the cached
// inverse square root of the point for PSD blocks.
double max_step_point(const std::vector<BlockView>& views, const std::vector<BlockScale>& scales,
                      const std::vector<double>& point, const std::vector<double>& dir,
                      bool primal) {
    double alpha = kInf;
    for (std::size_t bi = 0; bi < views.size(); ++bi) {
        const BlockView& v = views[bi];
        const BlockScale& sc = scales[bi];
        if (v.kind == ConeBlock::Kind::Psd) {
            const ComplexMatrix dm = unsvec_raw(dir.data() + v.off, v.size);
            const ComplexMatrix& ih = primal ? sc.xih : sc.sih;
            const double lmin = min_eigenvalue(HermitianOperator::trusted(ih * dm * ih));
            if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
        } else {
            for (std::size_t i = 0; i < v.size; ++i) {
                const double di = dir[v.off + i];
                if (di < 0.0) alpha = std::min(alpha, -point[v.off + i] / di);
            }
        }
    }
    return alpha;
}

// Mehrotra second-order term in the scaled space: sym(dxt dst) per PSD block,
// dxt_i * dst_i on the orthant (the W factors cancel entrywise there).
std::vector<double> corrector_term(const std::vector<BlockView>& views,
                                   const std::vector<BlockScale>& scales,
                                   const std::vector<double>& dx,
                                   const std::vector<double>& ds) {
    const std::vector<double> dxt = scale_by_w(views, scales, dx, /*down=*/true);
    const std::vector<double> dst = scale_by_w(views, scales, ds, /*down=*/false);
    std::vector<double> out(dx.size(), 0.0);
    for (const BlockView& v : views) {
        if (v.kind == ConeBlock::Kind::Psd) {
            const ComplexMatrix a = unsvec_raw(dxt.data() + v.off, v.size);
            const ComplexMatrix b = unsvec_raw(dst.data() + v.off, v.size);
            const ComplexMatrix sym = 0.5 * (a * b + b * a);
            svec_raw(sym, v.size, out.data() + v.off);
        } else {
            for (std::size_t i = 0; i < v.size; ++i)
                out[v.off + i] = dxt[v.off + i] * dst[v.off + i];
        }
    }
    return out;
}

// The Schur complement spans condition numbers up to ~1/mu^2 near
// convergence; factorizing and back-substituting in extended precision keeps
// the last Newton steps accurate enough to reach tight tolerances.
struct CholLd {
    std::size_t n = 0;
    std::vector<long double> l;  // row-major lower triangle, n x n
};

bool try_cholesky_ld(const std::vector<long double>& s, std::size_t n, long double jitter,
                     CholLd& out) {
    out.n = n;
    out.l.assign(n * n, 0.0L);
    for (std::size_t j = 0; j < n; ++j) {
        long double diag = s[j * n + j] + jitter;
        for (std::size_t k = 0; k < j; ++k) diag -= out.l[j * n + k] * out.l[j * n + k];
        if (!(diag > 0.0L) || !std::isfinite(static_cast<double>(diag))) return false;
        const long double root = sqrtl(diag);
        out.l[j * n + j] = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            long double acc = s[i * n + j];
            for (std::size_t k = 0; k < j; ++k) acc -= out.l[i * n + k] * out.l[j * n + k];
            out.l[i * n + j] = acc / root;
        }
    }
    return true;
}

CholLd cholesky_with_jitter(const std::vector<long double>& schur, std::size_t m) {
    long double max_diag = 0.0L;
    for (std::size_t i = 0; i < m; ++i) max_diag = std::max(max_diag, schur[i * m + i]);
    max_diag = std::max(max_diag, 1e-300L);
    CholLd out;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const long double jitter =
            attempt == 0 ? 0.0L : 1e-15L * max_diag * powl(10.0L, 2 * (attempt - 1));
        if (try_cholesky_ld(schur, m, jitter, out)) return out;
    }
    throw SolverError("newton system: Schur factorization failed");
}

std::vector<double> cholesky_solve(const CholLd& chol, const std::vector<double>& rhs) {
    const std::size_t n = chol.n;
    if (rhs.size() != n) throw DimensionError("cholesky_solve: size mismatch");
    std::vector<long double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double acc = rhs[i];
        for (std::size_t k = 0; k < i; ++k) acc -= chol.l[i * n + k] * z[k];
        z[i] = acc / chol.l[i * n + i];
    }
    std::vector<double> out(n);
    for (std::size_t ii = n; ii-- > 0;) {
        long double acc = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k)
            acc -= chol.l[k * n + ii] * static_cast<long double>(out[k]);
        out[ii] = static_cast<double>(acc / chol.l[ii * n + ii]);
    }
    return out;
}

void validate_program(const ConicProgram& prog) {
    if (prog.cone.blocks.empty()) throw DimensionError("conic program: cone has no blocks");
    for (const ConeBlock& blk : prog.cone.blocks)
        if (blk.size == 0) throw DimensionError("conic program: zero-sized cone block");
    const std::size_t n = prog.cone.scalar_dim();
    if (prog.c.size() != n)
        throw DimensionError("conic program: objective length does not match the cone");
    if (prog.a.cols() != n)
        throw DimensionError("conic program: constraint matrix width does not match the cone");
    if (prog.b.size() != prog.a.rows())
        throw DimensionError("conic program: right-hand side length does not match rows");
    for (double v : prog.c)
        if (!std::isfinite(v)) throw ValidationError("conic program: non-finite objective entry");
    for (double v : prog.b)
        if (!std::isfinite(v))
            throw ValidationError("conic program: non-finite right-hand side entry");
    for (double v : prog.a.data())
        if (!std::isfinite(v))
            throw ValidationError("conic program: non-finite constraint entry");
}

struct Direction {
    std::vector<double> dx, dy, ds;
    double dtau = 0.0, dkappa = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Public cone helpers.

ConeBlock psd_block(std::size_t dim) { return ConeBlock{ConeBlock::Kind::Psd, dim}; }
ConeBlock nonneg_block(std::size_t count) { return ConeBlock{ConeBlock::Kind::NonNeg, count}; }

std::size_t ConeSpec::scalar_dim() const {
    std::size_t n = 0;
    for (const ConeBlock& blk : blocks)
        n += blk.kind == ConeBlock::Kind::Psd ? blk.size * blk.size : blk.size;
    return n;
}

double ConeSpec::barrier_degree() const {
    double nu = 0.0;
    for (const ConeBlock& blk : blocks) nu += static_cast<double>(blk.size);
    return nu;
}

std::vector<double> svec(const HermitianOperator& h) {
    std::vector<double> out(h.dim() * h.dim());
    svec_raw(h.matrix(), h.dim(), out.data());
    return out;
}

HermitianOperator unsvec(const std::vector<double>& v, std::size_t dim) {
    if (v.size() != dim * dim)
        throw DimensionError("unsvec: coordinate length does not equal dim^2");
    return HermitianOperator::trusted(unsvec_raw(v.data(), dim));
}

// ---------------------------------------------------------------------------
// Solver.

Solution solve(const ConicProgram& prog, const SolveSettings& settings) {
    validate_program(prog);
    const std::size_t n = prog.cone.scalar_dim();
    const std::size_t m_full = prog.a.rows();
    const std::vector<BlockView> views = make_views(prog.cone);

    const Presolved pre = presolve(prog.a, prog.b);
    Solution sol;
    sol.dropped_rows = pre.dropped;
    if (pre.infeasible) {
        sol.status = SolveStatus::Infeasible;
        sol.x.assign(n, 0.0);
        sol.y = pre.farkas;
        sol.s.assign(n, 0.0);
        return sol;
    }

    const std::size_t m = pre.kept.size();
    RealMatrix a(m, n);
    std::vector<double> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = pre.kept[i];
        for (std::size_t j = 0; j < n; ++j) a(i, j) = prog.a(r, j);
        b[i] = prog.b[r];
    }
    const std::vector<double>& c = prog.c;
    const double bnorm = nrm2(b);
    const double cnorm = nrm2(c);
    const double nu = prog.cone.barrier_degree();

    auto expand_y = [&](const std::vector<double>& y_red) {
        std::vector<double> full(m_full, 0.0);
        for (std::size_t i = 0; i < m; ++i) full[pre.kept[i]] = y_red[i];
        return full;
    };

    // Initial point: cone identity (or the clamped warm start), unit
    // homogenization.
    std::vector<double> x = cone_identity(views, n);
    if (!settings.warm_x.empty() && settings.warm_x.size() != n)
        throw DimensionError("solve: warm start length does not match the cone");
    if (settings.warm_x.size() == n && all_finite(settings.warm_x)) {
        for (const BlockView& v : views) {
            if (v.kind == ConeBlock::Kind::Psd) {
                const ComplexMatrix wm = unsvec_raw(settings.warm_x.data() + v.off, v.size);
                const EigResult e = ceig(wm);
                const ComplexMatrix clamped =
                    rebuild(e, [](double l) { return std::max(l, 0.1); });
                svec_raw(clamped, v.size, x.data() + v.off);
            } else {
                for (std::size_t i = 0; i < v.size; ++i)
                    x[v.off + i] = std::max(settings.warm_x[v.off + i], 0.1);
            }
        }
    }
    std::vector<double> s = cone_identity(views, n);
    std::vector<double> y(m, 0.0);
    double tau = 1.0, kappa = 1.0;

    int flat_streak = 0, tiny_step_streak = 0;
    double mu_prev = kInf;
    int iter = 0;

    // Best de-homogenized iterate seen so far, so that an exhausted budget
    // reports the most accurate point rather than whatever the last (possibly
    // stalled) step produced.
    double best_merit = kInf, best_tau = 1.0;
    std::vector<double> best_x, best_y, best_s;
    double best_progress = kInf;
    int no_progress_streak = 0;

    auto finish_point = [&](SolveStatus status) {
        sol.status = status;
        if (status == SolveStatus::MaxIterations && !best_x.empty()) {
            x = best_x;
            y = best_y;
            s = best_s;
            tau = best_tau;
        }
        const double t = std::max(tau, 1e-300);
        sol.x = scaled(x, 1.0 / t);
        sol.y = expand_y(scaled(y, 1.0 / t));
        sol.s = scaled(s, 1.0 / t);
        sol.primal_value = dot(c, sol.x);
        sol.dual_value = dot(prog.b, sol.y);
        sol.gap = std::abs(sol.primal_value - sol.dual_value);
        sol.iterations = iter;
        return sol;
    };

    for (iter = 0; iter < settings.max_iters; ++iter) {
        // Residuals of the homogeneous embedding.
        std::vector<double> r1 = a.apply(x);  // A x - b tau
        axpy(-tau, b, r1);
        std::vector<double> r2 = a.apply_transpose(y);  // A^T y + s - c tau
        for (std::size_t i = 0; i < n; ++i) r2[i] += s[i] - c[i] * tau;
        const double r3 = -dot(c, x) + dot(b, y) - kappa;
        const double mu = (dot(x, s) + tau * kappa) / (nu + 1.0);

        // Progress measure for stall detection: distance to the nearest exit,
        // whether that is optimality or an infeasibility certificate.
        double progress = kInf;

        // Optimality of the de-homogenized pair.
        {
            const std::vector<double> xt = scaled(x, 1.0 / tau);
            const std::vector<double> yt = scaled(y, 1.0 / tau);
            std::vector<double> pr = a.apply(xt);
            axpy(-1.0, b, pr);
            const double pres = nrm2(pr) / (1.0 + bnorm);
            std::vector<double> dr = a.apply_transpose(yt);
            for (std::size_t i = 0; i < n; ++i) dr[i] += s[i] / tau - c[i];
            const double dres = nrm2(dr) / (1.0 + cnorm);
            const double p = dot(c, xt);
            const double d = dot(b, yt);
            const double merit =
                std::max({pres, dres, std::abs(p - d) / std::max(1.0, std::abs(p))});
            progress = merit;
            if (merit < best_merit) {
                best_merit = merit;
                best_x = x;
                best_y = y;
                best_s = s;
                best_tau = tau;
            }
            if (pres <= settings.tol_feas && dres <= settings.tol_feas &&
                std::abs(p - d) <= settings.tol_gap * std::max(1.0, std::abs(p))) {
                if (d > p + 1e-6 * std::max(1.0, std::abs(p)))
                    throw SolverError("solve: converged point violates weak duality");
                return finish_point(SolveStatus::Optimal);
            }
        }

        // Infeasibility / unboundedness certificates.
        {
            const double by = dot(b, y);
            if (by > 0.0) {
                std::vector<double> ays = a.apply_transpose(y);
                axpy(1.0, s, ays);
                progress = std::min(progress, nrm_inf(ays) / by);
                if (nrm_inf(ays) <= settings.tol_feas * by) {
                    sol.status = SolveStatus::Infeasible;
                    sol.x.assign(n, 0.0);
                    sol.y = expand_y(scaled(y, 1.0 / by));
                    sol.s = scaled(s, 1.0 / by);
                    sol.iterations = iter;
                    return sol;
                }
            }
            const double cx = dot(c, x);
            if (-cx > 0.0) {
                const std::vector<double> ax = a.apply(x);
                progress = std::min(progress, nrm_inf(ax) / (-cx));
                if (nrm_inf(ax) <= settings.tol_feas * (-cx)) {
                    sol.status = SolveStatus::Unbounded;
                    sol.x = scaled(x, 1.0 / (-cx));
                    sol.y.assign(m_full, 0.0);
                    sol.s.assign(n, 0.0);
                    sol.iterations = iter;
                    return sol;
                }
            }
        }

        if (progress < 0.99 * best_progress) {
            no_progress_streak = 0;
            best_progress = progress;
        } else if (++no_progress_streak >= 6) {
            return finish_point(SolveStatus::MaxIterations);
        }

        if (mu < 1e-17) return finish_point(SolveStatus::MaxIterations);

        // Scaling and the shared Schur factorization.
        const std::vector<BlockScale> scales = compute_scaling(views, x, s);
        const std::vector<double> lam_sq = lambda_squared(views, scales, n);

        RealMatrix g(m, n);  // row r: H(A_r)
        {
            std::vector<double> arow(n), hrow(n);
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t j = 0; j < n; ++j) arow[j] = a(r, j);
                apply_h(views, scales, arow, hrow);
                for (std::size_t j = 0; j < n; ++j) g(r, j) = hrow[j];
            }
        }
        std::vector<long double> schur(m * m, 0.0L);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t q2 = r; q2 < m; ++q2) {
                long double acc = 0.0L;
                for (std::size_t j = 0; j < n; ++j)
                    acc += static_cast<long double>(a(q2, j)) * g(r, j);
                schur[r * m + q2] = acc;
                schur[q2 * m + r] = acc;
            }
        const CholLd chol = cholesky_with_jitter(schur, m);

        const std::vector<double> hc = apply_h(views, scales, c);
        std::vector<double> ahc_b = a.apply(hc);
        axpy(1.0, b, ahc_b);
        const std::vector<double> u1 = cholesky_solve(chol, ahc_b);
        std::vector<double> atu1 = a.apply_transpose(u1);
        axpy(-1.0, c, atu1);
        const std::vector<double> p1 = apply_h(views, scales, atu1);
        const double den = dot(atu1, p1) + kappa / tau;
        if (!(den > 0.0) || !std::isfinite(den))
            throw SolverError("newton system: degenerate pivot");

        // Solve the linearized homogeneous system
        //   A dx - b dtau            = R1
        //   A^T dy + ds - c dtau     = R2
        //   -c.dx + b.dy - dkappa    = R3
        //   H^{-1} dx + ds           = R4
        //   kappa dtau + tau dkappa  = R5
        // by elimination through the shared Schur factorization.  ds, dx and
        // dkappa are recomputed from their defining equations, so only the two
        // equations folded into the Schur complement carry a solve residual.
        auto solve_reduced = [&](const std::vector<double>& rr1, const std::vector<double>& rr2,
                                 double rr3, const std::vector<double>& rr4, double rr5) {
            std::vector<double> r42 = rr4;  // R4 - R2
            axpy(-1.0, rr2, r42);
            const std::vector<double> h42 = apply_h(views, scales, r42);
            std::vector<double> rhs_m = a.apply(h42);
            for (std::size_t i = 0; i < m; ++i) rhs_m[i] = rr1[i] - rhs_m[i];
            const std::vector<double> u2 = cholesky_solve(chol, rhs_m);
            std::vector<double> atu2 = a.apply_transpose(u2);
            axpy(1.0, r42, atu2);
            const std::vector<double> p2 = apply_h(views, scales, atu2);

            Direction dir;
            dir.dtau = (rr3 + dot(c, p2) - dot(b, u2) + rr5 / tau) / den;
            dir.dy = u2;
            axpy(dir.dtau, u1, dir.dy);
            dir.ds = a.apply_transpose(dir.dy);
            for (std::size_t i = 0; i < n; ++i) dir.ds[i] = rr2[i] - dir.ds[i] + c[i] * dir.dtau;
            std::vector<double> hx = rr4;  // R4 - ds
            axpy(-1.0, dir.ds, hx);
            dir.dx = apply_h(views, scales, hx);
            dir.dkappa = (rr5 - kappa * dir.dtau) / tau;
            return dir;
        };

        const std::vector<double> zero_n(n, 0.0);
        auto newton = [&](double eta, const std::vector<double>& dc, double dt) {
            const std::vector<double> u = lyapunov_solve(views, scales, dc);
            const std::vector<double> v = scale_by_w(views, scales, u, /*down=*/true);
            const std::vector<double> rr1 = scaled(r1, -eta);
            const std::vector<double> rr2 = scaled(r2, -eta);
            const double rr3 = -eta * r3;
            Direction dir = solve_reduced(rr1, rr2, rr3, v, dt);
            // Iterative refinement against the two eliminated equations keeps
            // the direction usable once the scaling matrix becomes severely
            // ill-conditioned near convergence.
            const double rhs_scale = 1.0 + std::max(nrm_inf(rr1), std::abs(rr3));
            Direction best = dir;
            double best_err = kInf;
            for (int pass = 0; pass < 4; ++pass) {
                // Residuals accumulated in extended precision: the refinement
                // stalls otherwise once the Schur system becomes extremely
                // ill-conditioned.
                std::vector<double> rho1(m);
                for (std::size_t i = 0; i < m; ++i) {
                    long double acc = static_cast<long double>(rr1[i]) +
                                      static_cast<long double>(b[i]) * dir.dtau;
                    for (std::size_t j = 0; j < n; ++j)
                        acc -= static_cast<long double>(a(i, j)) * dir.dx[j];
                    rho1[i] = static_cast<double>(acc);
                }
                long double acc3 = rr3;
                for (std::size_t j = 0; j < n; ++j)
                    acc3 += static_cast<long double>(c[j]) * dir.dx[j];
                for (std::size_t i = 0; i < m; ++i)
                    acc3 -= static_cast<long double>(b[i]) * dir.dy[i];
                acc3 += dir.dkappa;
                const double rho3 = static_cast<double>(acc3);
                const double err = std::max(nrm_inf(rho1), std::abs(rho3));
                if (err < best_err) {
                    best = dir;
                    best_err = err;
                }
                if (err <= 1e-14 * rhs_scale || pass == 3) break;
                const Direction corr = solve_reduced(rho1, zero_n, rho3, zero_n, 0.0);
                axpy(1.0, corr.dx, dir.dx);
                axpy(1.0, corr.dy, dir.dy);
                axpy(1.0, corr.ds, dir.ds);
                dir.dtau += corr.dtau;
                dir.dkappa += corr.dkappa;
            }
            return best;
        };

        auto max_step = [&](const Direction& dir) {
            double alpha = max_step_point(views, scales, x, dir.dx, /*primal=*/true);
            alpha = std::min(alpha, max_step_point(views, scales, s, dir.ds, /*primal=*/false));
            if (dir.dtau < 0.0) alpha = std::min(alpha, -tau / dir.dtau);
            if (dir.dkappa < 0.0) alpha = std::min(alpha, -kappa / dir.dkappa);
            return alpha;
        };

        // True when point + alpha * dir stays strictly inside the cone,
        // decided by the same eigensolver the scaling update relies on, so an
        // accepted step cannot fail the next iteration's positivity checks.
        auto step_interior = [&](const std::vector<double>& point,
                                 const std::vector<double>& step_dir, double alpha) {
            for (const BlockView& v : views) {
                if (v.kind == ConeBlock::Kind::Psd) {
                    std::vector<double> blk(v.size * v.size);
                    for (std::size_t i = 0; i < blk.size(); ++i)
                        blk[i] = point[v.off + i] + alpha * step_dir[v.off + i];
                    const EigResult e = ceig(unsvec_raw(blk.data(), v.size));
                    if (e.eigenvalues.empty() || e.eigenvalues.back() <= 0.0) return false;
                } else {
                    for (std::size_t i = 0; i < v.size; ++i)
                        if (point[v.off + i] + alpha * step_dir[v.off + i] <= 0.0) return false;
                }
            }
            return true;
        };

        // Predictor.
        const std::vector<double> dc_aff = scaled(lam_sq, -1.0);
        const Direction aff = newton(1.0, dc_aff, -tau * kappa);
        const double alpha_aff = std::min(1.0, max_step(aff));
        double mu_aff;
        {
            std::vector<double> xa = x, sa = s;
            axpy(alpha_aff, aff.dx, xa);
            axpy(alpha_aff, aff.ds, sa);
            const double ta = tau + alpha_aff * aff.dtau;
            const double ka = kappa + alpha_aff * aff.dkappa;
            mu_aff = (dot(xa, sa) + ta * ka) / (nu + 1.0);
        }
        double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
        sigma = std::min(1.0, std::max(0.0, sigma));

        // Corrector.
        std::vector<double> dc = corrector_term(views, scales, aff.dx, aff.ds);
        for (std::size_t i = 0; i < n; ++i) dc[i] = -lam_sq[i] - dc[i];
        const std::vector<double> e = cone_identity(views, n);
        axpy(sigma * mu, e, dc);
        const double dt = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
        const Direction dir = newton(1.0 - sigma, dc, dt);
        double alpha = std::min(1.0, 0.98 * max_step(dir));

        // The boundary estimate from max_step works in the scaled metric and
        // turns unreliable once the blocks become nearly singular; verify the
        // stepped point directly and back off until it stays interior. The
        // current point is strictly interior, so small enough steps pass.
        int backoff = 0;
        for (; backoff < 40; ++backoff) {
            if (tau + alpha * dir.dtau > 0.0 && kappa + alpha * dir.dkappa > 0.0 &&
                step_interior(x, dir.dx, alpha) && step_interior(s, dir.ds, alpha))
                break;
            alpha *= 0.5;
        }
        if (backoff == 40) return finish_point(SolveStatus::MaxIterations);

        axpy(alpha, dir.dx, x);
        axpy(alpha, dir.dy, y);
        axpy(alpha, dir.ds, s);
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;

        if (!all_finite(x) || !all_finite(y) || !all_finite(s) || !std::isfinite(tau) ||
            !std::isfinite(kappa) || tau <= 0.0 || kappa <= 0.0)
            throw SolverError("solve: iterate became non-finite");

        // Stall detection, reported as an exhausted budget rather than a
        // numerical failure.
        tiny_step_streak = alpha < 1e-8 ? tiny_step_streak + 1 : 0;
        flat_streak = mu >= 0.9999 * mu_prev ? flat_streak + 1 : 0;
        mu_prev = mu;
        if (tiny_step_streak >= 3 || flat_streak >= 10)
            return finish_point(SolveStatus::MaxIterations);
    }
    return finish_point(SolveStatus::MaxIterations);
}

// ---------------------------------------------------------------------------
// Residual verification.

VerifyReport verify_solution(const ConicProgram& prog, const Solution& sol, double tol) {
    validate_program(prog);
    const std::vector<BlockView> views = make_views(prog.cone);
    VerifyReport rep;

    std::vector<double> pr = prog.a.apply(sol.x);
    axpy(-1.0, prog.b, pr);
    rep.primal_residual = nrm2(pr) / (1.0 + nrm2(prog.b));

    std::vector<double> dr = prog.a.apply_transpose(sol.y);
    for (std::size_t i = 0; i < dr.size(); ++i) dr[i] += sol.s[i] - prog.c[i];
    rep.dual_residual = nrm2(dr) / (1.0 + nrm2(prog.c));

    rep.primal_cone_violation = cone_violation(views, sol.x);
    rep.dual_cone_violation = cone_violation(views, sol.s);

    rep.primal_value = dot(prog.c, sol.x);
    rep.dual_value = dot(prog.b, sol.y);
    rep.gap = std::abs(rep.primal_value - rep.dual_value);
    rep.complementarity = std::abs(dot(sol.x, sol.s));

    rep.primal_ok = rep.primal_residual <= tol && rep.primal_cone_violation <= tol;
    rep.dual_ok = rep.dual_residual <= tol && rep.dual_cone_violation <= tol;
    rep.gap_ok = rep.gap <= tol * std::max(1.0, std::abs(rep.primal_value));
    rep.pass = rep.primal_ok && rep.dual_ok && rep.gap_ok;
    return rep;
}

// ---------------------------------------------------------------------------
// Debug dump.

std::string program_to_json(const ConicProgram& prog) {
    nlohmann::ordered_json j;
    j["blocks"] = nlohmann::ordered_json::array();
    for (const ConeBlock& blk : prog.cone.blocks)
        j["blocks"].push_back(
            {{"kind", blk.kind == ConeBlock::Kind::Psd ? "psd" : "nonneg"},
             {"size", blk.size}});
    j["c"] = prog.c;
    j["b"] = prog.b;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < prog.a.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t col = 0; col < prog.a.cols(); ++col) row.push_back(prog.a(r, col));
        rows.push_back(std::move(row));
    }
    j["a"] = std::move(rows);
    return j.dump(2);
}

void dump_program(const ConicProgram& prog, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("dump_program: cannot open " + path);
    out << program_to_json(prog) << "\n";
}

// ---------------------------------------------------------------------------
// ProgramBuilder.

std::size_t ProgramBuilder::add_psd_var(std::size_t dim) {
    if (dim == 0) throw DimensionError("add_psd_var: zero dimension");
    vars_.push_back({ConeBlock::Kind::Psd, dim, cols_});
    cols_ += dim * dim;
    return vars_.size() - 1;
}

std::size_t ProgramBuilder::add_nonneg_var(std::size_t count) {
    if (count == 0) throw DimensionError("add_nonneg_var: zero count");
    vars_.push_back({ConeBlock::Kind::NonNeg, count, cols_});
    cols_ += count;
    return vars_.size() - 1;
}

const ProgramBuilder::Var& ProgramBuilder::var_at(std::size_t var) const {
    if (var >= vars_.size()) throw DimensionError("program builder: unknown variable handle");
    return vars_[var];
}

const ProgramBuilder::Constraint& ProgramBuilder::constraint_at(std::size_t constraint) const {
    if (constraint >= constraints_.size())
        throw DimensionError("program builder: unknown constraint handle");
    return constraints_[constraint];
}

void ProgramBuilder::add_objective_term(std::size_t var, const HermitianOperator& coeff) {
    const Var& v = var_at(var);
    if (v.kind != ConeBlock::Kind::Psd || v.size != coeff.dim())
        throw DimensionError("objective term: operator coefficient needs a matching PSD variable");
    obj_psd_.emplace_back(var, svec(coeff));
}

void ProgramBuilder::add_objective_term(std::size_t var, std::size_t index, double coeff) {
    const Var& v = var_at(var);
    if (v.kind != ConeBlock::Kind::NonNeg || index >= v.size)
        throw DimensionError("objective term: index outside the nonnegative variable");
    obj_scalar_.push_back({{var, index}, coeff});
}

std::size_t ProgramBuilder::add_matrix_constraint(const HermitianOperator& rhs) {
    Constraint cons;
    cons.matrix = true;
    cons.dim = rhs.dim();
    cons.offset = rows_;
    cons.rhs = svec(rhs);
    rows_ += rhs.dim() * rhs.dim();
    constraints_.push_back(std::move(cons));
    return constraints_.size() - 1;
}

void ProgramBuilder::add_matrix_term(std::size_t constraint, std::size_t var, double coeff) {
    if (constraint >= constraints_.size())
        throw DimensionError("program builder: unknown constraint handle");
    Constraint& cons = constraints_[constraint];
    const Var& v = var_at(var);
    if (!cons.matrix || v.kind != ConeBlock::Kind::Psd || v.size != cons.dim)
        throw DimensionError("matrix term: PSD variable dimension mismatch");
    cons.m_psd.push_back({var, coeff});
}

void ProgramBuilder::add_matrix_term(std::size_t constraint, std::size_t var, std::size_t index,
                                     const HermitianOperator& coeff) {
    if (constraint >= constraints_.size())
        throw DimensionError("program builder: unknown constraint handle");
    Constraint& cons = constraints_[constraint];
    const Var& v = var_at(var);
    if (!cons.matrix || v.kind != ConeBlock::Kind::NonNeg || index >= v.size ||
        coeff.dim() != cons.dim)
        throw DimensionError("matrix term: scalar-entry coefficient dimension mismatch");
    cons.m_scalar.push_back({var, index, svec(coeff)});
}

std::size_t ProgramBuilder::add_scalar_constraint(double rhs) {
    Constraint cons;
    cons.matrix = false;
    cons.dim = 1;
    cons.offset = rows_;
    cons.rhs = {rhs};
    rows_ += 1;
    constraints_.push_back(std::move(cons));
    return constraints_.size() - 1;
}

void ProgramBuilder::add_scalar_term(std::size_t constraint, std::size_t var,
                                     const HermitianOperator& coeff) {
    if (constraint >= constraints_.size())
        throw DimensionError("program builder: unknown constraint handle");
    Constraint& cons = constraints_[constraint];
    const Var& v = var_at(var);
    if (cons.matrix || v.kind != ConeBlock::Kind::Psd || v.size != coeff.dim())
        throw DimensionError("scalar term: PSD variable dimension mismatch");
    cons.s_psd.push_back({var, svec(coeff)});
}

void ProgramBuilder::add_scalar_term(std::size_t constraint, std::size_t var, std::size_t index,
                                     double coeff) {
    if (constraint >= constraints_.size())
        throw DimensionError("program builder: unknown constraint handle");
    Constraint& cons = constraints_[constraint];
    const Var& v = var_at(var);
    if (cons.matrix || v.kind != ConeBlock::Kind::NonNeg || index >= v.size)
        throw DimensionError("scalar term: index outside the nonnegative variable");
    cons.s_scalar.push_back({var, index, coeff});
}

ConicProgram ProgramBuilder::build() const {
    if (vars_.empty()) throw DimensionError("program builder: no variables");
    ConicProgram prog;
    for (const Var& v : vars_) prog.cone.blocks.push_back({v.kind, v.size});
    prog.c.assign(cols_, 0.0);
    for (const auto& [var, coeff] : obj_psd_) {
        const Var& v = vars_[var];
        for (std::size_t k = 0; k < coeff.size(); ++k) prog.c[v.offset + k] += coeff[k];
    }
    for (const auto& [key, coeff] : obj_scalar_)
        prog.c[vars_[key.first].offset + key.second] += coeff;

    prog.a = RealMatrix(rows_, cols_);
    prog.b.assign(rows_, 0.0);
    for (const Constraint& cons : constraints_) {
        for (std::size_t k = 0; k < cons.rhs.size(); ++k) prog.b[cons.offset + k] = cons.rhs[k];
        for (const MatrixPsdTerm& term : cons.m_psd) {
            const Var& v = vars_[term.var];
            const std::size_t len = v.size * v.size;
            for (std::size_t k = 0; k < len; ++k)
                prog.a(cons.offset + k, v.offset + k) += term.coeff;
        }
        for (const MatrixScalarTerm& term : cons.m_scalar) {
            const Var& v = vars_[term.var];
            for (std::size_t k = 0; k < term.coeff_svec.size(); ++k)
                prog.a(cons.offset + k, v.offset + term.index) += term.coeff_svec[k];
        }
        for (const ScalarPsdTerm& term : cons.s_psd) {
            const Var& v = vars_[term.var];
            for (std::size_t k = 0; k < term.coeff_svec.size(); ++k)
                prog.a(cons.offset, v.offset + k) += term.coeff_svec[k];
        }
        for (const ScalarScalarTerm& term : cons.s_scalar) {
            const Var& v = vars_[term.var];
            prog.a(cons.offset, v.offset + term.index) += term.coeff;
        }
    }
    return prog;
}

std::size_t ProgramBuilder::var_offset(std::size_t var) const { return var_at(var).offset; }

std::size_t ProgramBuilder::constraint_offset(std::size_t constraint) const {
    return constraint_at(constraint).offset;
}

HermitianOperator ProgramBuilder::psd_value(const std::vector<double>& x, std::size_t var) const {
    const Var& v = var_at(var);
    if (v.kind != ConeBlock::Kind::Psd) throw DimensionError("psd_value: not a PSD variable");
    if (x.size() < v.offset + v.size * v.size)
        throw DimensionError("psd_value: vector too short for this layout");
    return HermitianOperator::trusted(unsvec_raw(x.data() + v.offset, v.size));
}

double ProgramBuilder::scalar_value(const std::vector<double>& x, std::size_t var,
                                    std::size_t index) const {
    const Var& v = var_at(var);
    if (v.kind != ConeBlock::Kind::NonNeg || index >= v.size)
        throw DimensionError("scalar_value: index outside the nonnegative variable");
    if (x.size() < v.offset + v.size)
        throw DimensionError("scalar_value: vector too short for this layout");
    return x[v.offset + index];
}

HermitianOperator ProgramBuilder::matrix_dual(const std::vector<double>& y,
                                              std::size_t constraint) const {
    const Constraint& cons = constraint_at(constraint);
    if (!cons.matrix) throw DimensionError("matrix_dual: not a matrix constraint");
    if (y.size() < cons.offset + cons.dim * cons.dim)
        throw DimensionError("matrix_dual: vector too short for this layout");
    return HermitianOperator::trusted(unsvec_raw(y.data() + cons.offset, cons.dim));
}

double ProgramBuilder::scalar_dual(const std::vector<double>& y, std::size_t constraint) const {
    const Constraint& cons = constraint_at(constraint);
    if (cons.matrix) throw DimensionError("scalar_dual: not a scalar constraint");
    if (y.size() <= cons.offset)
        throw DimensionError("scalar_dual: vector too short for this layout");
    return y[cons.offset];
}

}  // namespace resgames
