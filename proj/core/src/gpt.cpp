#include "resgames/gpt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "resgames/conic.hpp"
#include "resgames/errors.hpp"
#include "runtime.hpp"

namespace resgames {
namespace {

using detail::Rng;
using detail::parallel_for;

constexpr double kUnitPairingTol = 1e-12;
constexpr double kMembershipTol = 1e-9;
constexpr double kCompletenessTol = 1e-12;
// An object whose quantifier value is at or below this counts as free when
// deciding whether a witness game exists at all.
constexpr double kFreeValueTol = 1e-7;
// Mixture weight below which the exclusion preparation falls back to the
// polytope barycenter.
constexpr double kXiDegenerateTol = 1e-12;
constexpr double kPmfTol = 1e-12;
// Random games drawn by the verifier and the probe states used to spot-check
// the constructed bounds.
constexpr std::size_t kGenericGames = 20;
constexpr std::size_t kGenericOutcomes = 2;
constexpr std::size_t kProbeStates = 16;
constexpr std::uint64_t kProbeSeed = 0x9e3779b97f4a7c15ULL;
// Cap on the deterministic strategies enumerated by gpt_best_free_response.
constexpr std::size_t kStrategyCap = 1u << 16;
constexpr std::size_t kVertexCap = 64;
// Sign classification threshold inside the double description sweep.
constexpr double kRayTol = 1e-10;
// The decomposition and witness programs must agree this tightly before a
// quantifier value is trusted.
constexpr double kDualityGuard = 1e-6;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void add_scaled(std::vector<double>& acc, double c, const std::vector<double>& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
}

std::vector<double> scaled(double c, const std::vector<double>& v) {
    std::vector<double> out(v);
    for (double& x : out) x *= c;
    return out;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

// Acceptance policy shared by every quantifier solve: Optimal is accepted
// as-is; an exhausted budget is accepted only when the returned point still
// passes residual verification at 5e-7; everything else is a failure.
Solution solve_accepted(const ConicProgram& prog, const std::string& what,
                        QuantifierDiagnostics* diag) {
    Solution sol = solve(prog);
    if (sol.status == SolveStatus::Infeasible) {
        throw SolverError(what + ": program infeasible");
    }
    if (sol.status == SolveStatus::Unbounded) {
        throw SolverError(what + ": program unbounded (the free family cannot absorb the object)");
    }
    bool accepted_after_budget = false;
    if (sol.status == SolveStatus::MaxIterations) {
        if (!verify_solution(prog, sol, 5e-7).pass) {
            throw SolverError(what + ": solver stopped before reaching an acceptable point");
        }
        accepted_after_budget = true;
    }
    if (diag != nullptr) {
        VerifyReport rep = verify_solution(prog, sol, 5e-7);
        diag->gap = sol.gap;
        diag->primal_residual = rep.primal_residual;
        diag->dual_residual = rep.dual_residual;
        diag->iterations = sol.iterations;
        diag->accepted_after_budget = accepted_after_budget;
    }
    return sol;
}

// Indices of a maximal linearly independent subset of the rows, selected by
// Gaussian elimination with partial pivoting.
std::vector<std::size_t> independent_rows(const std::vector<std::vector<double>>& rows,
                                          std::size_t n) {
    std::vector<std::vector<double>> reduced;
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < rows.size() && chosen.size() < n; ++i) {
        std::vector<double> v = rows[i];
        for (std::size_t j = 0; j < reduced.size(); ++j) {
            const double factor = v[pivots[j]] / reduced[j][pivots[j]];
            if (factor != 0.0) add_scaled(v, -factor, reduced[j]);
        }
        std::size_t piv = 0;
        double best = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(v[k]) > best) {
                best = std::abs(v[k]);
                piv = k;
            }
        if (best <= kRayTol) continue;
        chosen.push_back(i);
        reduced.push_back(std::move(v));
        pivots.push_back(piv);
    }
    return chosen;
}

// Dense Gauss-Jordan inverse of a row-major n x n matrix.
std::vector<double> invert_dense(std::vector<double> m, std::size_t n) {
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        if (std::abs(m[piv * n + col]) <= kRayTol)
            throw SolverError("dual cone computation: basis matrix is singular");
        if (piv != col)
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(m[piv * n + k], m[col * n + k]);
                std::swap(inv[piv * n + k], inv[col * n + k]);
            }
        const double d = m[col * n + col];
        for (std::size_t k = 0; k < n; ++k) {
            m[col * n + k] /= d;
            inv[col * n + k] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                m[r * n + k] -= f * m[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    return inv;
}

// Extreme rays of {z : <h_i, z> >= 0 for all i} by double description with
// the combinatorial adjacency test. The caller guarantees the rows span R^n
// and the cone is pointed, so a simplicial start exists and every
// intermediate cone stays pointed. Rays come back unit-norm in a
// deterministic order.
std::vector<std::vector<double>> dual_cone_rays(const std::vector<std::vector<double>>& half,
                                                std::size_t n) {
    struct Ray {
        std::vector<double> r;
        std::uint64_t zero = 0;  // processed halfspaces this ray saturates
    };
    const std::vector<std::size_t> basis = independent_rows(half, n);
    if (basis.size() != n)
        throw SolverError("dual cone computation: halfspace normals do not span the space");

    std::vector<double> m(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) m[j * n + k] = half[basis[j]][k];
    const std::vector<double> inv = invert_dense(std::move(m), n);

    std::uint64_t processed = 0;
    for (std::size_t j : basis) processed |= (std::uint64_t{1} << j);

    std::vector<Ray> rays;
    rays.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Ray ray;
        ray.r.resize(n);
        for (std::size_t row = 0; row < n; ++row) ray.r[row] = inv[row * n + k];
        const double nm = norm2(ray.r);
        for (double& x : ray.r) x /= nm;
        for (std::size_t j : basis)
            if (std::abs(dot(half[j], ray.r)) <= kRayTol) ray.zero |= (std::uint64_t{1} << j);
        rays.push_back(std::move(ray));
    }

    for (std::size_t h = 0; h < half.size(); ++h) {
        if (processed & (std::uint64_t{1} << h)) continue;
        std::vector<double> s(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) s[i] = dot(half[h], rays[i].r);
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (s[i] > kRayTol)
                pos.push_back(i);
            else if (s[i] < -kRayTol)
                neg.push_back(i);
        }
        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (s[i] >= -kRayTol) {
                Ray kept = rays[i];
                if (std::abs(s[i]) <= kRayTol) kept.zero |= (std::uint64_t{1} << h);
                next.push_back(std::move(kept));
            }
        for (std::size_t p : pos)
            for (std::size_t q : neg) {
                const std::uint64_t common = rays[p].zero & rays[q].zero;
                bool adjacent = true;
                for (std::size_t w = 0; w < rays.size(); ++w) {
                    if (w == p || w == q) continue;
                    if ((common & ~rays[w].zero) == 0) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Ray fresh;
                fresh.r.resize(n);
                for (std::size_t k = 0; k < n; ++k)
                    fresh.r[k] = s[p] * rays[q].r[k] - s[q] * rays[p].r[k];
                const double nm = norm2(fresh.r);
                if (nm <= kRayTol) continue;
                for (double& x : fresh.r) x /= nm;
                fresh.zero = 0;
                for (std::size_t j = 0; j < half.size(); ++j) {
                    const bool seen = (processed & (std::uint64_t{1} << j)) != 0 || j == h;
                    if (seen && std::abs(dot(half[j], fresh.r)) <= kRayTol)
                        fresh.zero |= (std::uint64_t{1} << j);
                }
                next.push_back(std::move(fresh));
            }
        rays = std::move(next);
        processed |= (std::uint64_t{1} << h);
        if (rays.empty())
            throw SolverError("dual cone computation: cone collapsed, model is degenerate");
    }

    std::vector<std::vector<double>> out;
    out.reserve(rays.size());
    for (Ray& ray : rays) {
        bool dup = false;
        for (const std::vector<double>& seen : out)
            if (dot(seen, ray.r) > 1.0 - 1e-9) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(ray.r));
    }
    std::sort(out.begin(), out.end(), [](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(a[i] - b[i]) <= 1e-9) continue;
            return a[i] < b[i];
        }
        return false;
    });
    return out;
}

void check_prior(const std::vector<double>& p, std::size_t settings, const std::string& what) {
    if (p.size() != settings)
        throw DimensionError(what + ": prior length does not match the measurement settings");
    double sum = 0.0;
    for (double v : p) {
        if (!(v > 0.0)) throw ValidationError(what + ": prior entries must be strictly positive");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kPmfTol) throw ValidationError(what + ": prior does not sum to 1");
}

std::size_t ipow_capped(std::size_t base, std::size_t exp, const std::string& what) {
    std::size_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base == 0 || v > kStrategyCap / base)
            throw EnumerationCapError(what + ": deterministic strategy space exceeds the cap");
        v *= base;
    }
    return v;
}

// Free generators scaled to unit pairing and validated as model states.
std::vector<std::vector<double>> free_state_extremes(const GPTModel& model,
                                                     const GPTFreeStateSet& f,
                                                     const std::string& what) {
    if (f.generators.empty())
        throw ValidationError(what + ": free state family has no generators");
    std::vector<std::vector<double>> out;
    out.reserve(f.generators.size());
    for (const std::vector<double>& g : f.generators) {
        if (g.size() != model.dim())
            throw DimensionError(what + ": free state generator dimension mismatch");
        const double up = dot(model.unit(), g);
        if (!(up > 0.0))
            throw ValidationError(what + ": free state generator has no unit pairing");
        std::vector<double> sigma = scaled(1.0 / up, g);
        if (!model.contains(sigma, kMembershipTol))
            throw ValidationError(what + ": free state generator lies outside the state cone");
        out.push_back(std::move(sigma));
    }
    return out;
}

// <e_{a|x}, xi_{b|y}(omega)> for every index combination, with the stored
// tail branch already scaled down to a single logical branch.
struct EvalTable {
    std::size_t tau = 0, stored = 0, kappa = 0, l = 0;
    std::vector<double> val;  // [((y*stored + b)*kappa + x)*l + a]

    double at(std::size_t y, std::size_t b, std::size_t x, std::size_t a) const {
        return val[((y * stored + b) * kappa + x) * l + a];
    }
};

EvalTable make_table(const GPTGameEnsemble& game, const GPTState& omega,
                     const GPTMeasurementSet& e) {
    const GPTInstrumentSet& inst = game.instruments();
    if (omega.dim() != inst.dim())
        throw DimensionError("game evaluation: state dimension does not match the instrument input");
    if (e.dim() != inst.dim())
        throw DimensionError(
            "game evaluation: measurement dimension does not match the subchannel output");
    EvalTable t;
    t.tau = inst.settings();
    t.stored = inst.outcomes();
    t.kappa = e.settings();
    t.l = e.outcomes();
    t.val.resize(t.tau * t.stored * t.kappa * t.l);
    const double tail_scale = 1.0 / static_cast<double>(game.tail_multiplicity());
    for (std::size_t y = 0; y < t.tau; ++y)
        for (std::size_t b = 0; b < t.stored; ++b) {
            const std::vector<double> out = inst.subchannel(b, y).apply(omega.vector());
            const double scale =
                (game.tail_multiplicity() > 1 && b + 1 == t.stored) ? tail_scale : 1.0;
            for (std::size_t x = 0; x < t.kappa; ++x)
                for (std::size_t a = 0; a < t.l; ++a)
                    t.val[((y * t.stored + b) * t.kappa + x) * t.l + a] =
                        scale * dot(e.effect(a, x), out);
        }
    return t;
}

GameValue evaluate_gpt_game(const GPTGameEnsemble& game, const GPTState& omega,
                            const GPTMeasurementSet& e, bool maximize) {
    const EvalTable t = make_table(game, omega, e);
    GameValue gv;
    gv.optimal_strategy.x_of_y.assign(t.tau, 0);
    gv.optimal_strategy.g_of_ay.assign(t.tau, std::vector<std::size_t>(t.l, 0));
    gv.per_setting_values.assign(t.tau, 0.0);
    const double worst =
        maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < t.tau; ++y) {
        double best_sum = worst;
        std::size_t best_x = 0;
        std::vector<std::size_t> best_row(t.l, 0);
        std::vector<std::size_t> row(t.l, 0);
        for (std::size_t x = 0; x < t.kappa; ++x) {
            double sum = 0.0;
            for (std::size_t a = 0; a < t.l; ++a) {
                double pick = t.at(y, 0, x, a);
                std::size_t pick_b = 0;
                for (std::size_t b = 1; b < t.stored; ++b) {
                    const double v = t.at(y, b, x, a);
                    if (maximize ? v > pick : v < pick) {
                        pick = v;
                        pick_b = b;
                    }
                }
                row[a] = pick_b;
                sum += pick;
            }
            if (maximize ? sum > best_sum : sum < best_sum) {
                best_sum = sum;
                best_x = x;
                best_row = row;
            }
        }
        if (best_sum < 0.0) {
            // Every term is a pairing of a valid effect with a cone vector,
            // so a genuine negative value is impossible; wipe the roundoff,
            // refuse anything larger.
            if (best_sum < -1e-9)
                throw SolverError("game evaluation: negative probability encountered");
            best_sum = 0.0;
        }
        gv.per_setting_values[y] = best_sum;
        gv.optimal_strategy.x_of_y[y] = best_x;
        gv.optimal_strategy.g_of_ay[y] = std::move(best_row);
        gv.value += game.prior()[y] * best_sum;
    }
    return gv;
}

// Sums the per-setting witness blocks and divides by the prior: the scale
// t_y = <u, sum_b z_{b|y}> / p(y) entering both game constructions.
std::vector<double> witness_setting_scales(
    const GPTModel& model, const std::vector<std::vector<std::vector<double>>>& witness_set,
    const std::vector<double>& p_x) {
    std::vector<double> t(p_x.size(), 0.0);
    for (std::size_t x = 0; x < p_x.size(); ++x) {
        double up = 0.0;
        for (const std::vector<double>& w : witness_set[x]) up += dot(model.unit(), w);
        t[x] = up / p_x[x];
    }
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Model.

GPTModel::GPTModel(std::size_t dim, std::vector<std::vector<double>> vertices,
                   std::vector<double> unit)
    : dim_(dim), vertices_(std::move(vertices)), unit_(std::move(unit)) {
    if (dim_ == 0) throw DimensionError("gpt model: ambient dimension must be positive");
    if (vertices_.empty()) throw ValidationError("gpt model: at least one vertex is required");
    if (vertices_.size() > kVertexCap)
        throw EnumerationCapError("gpt model: vertex count exceeds the cap of 64");
    if (unit_.size() != dim_)
        throw DimensionError("gpt model: unit functional dimension mismatch");
    for (const std::vector<double>& v : vertices_) {
        if (v.size() != dim_) throw DimensionError("gpt model: vertex dimension mismatch");
        if (std::abs(dot(unit_, v) - 1.0) > kUnitPairingTol)
            throw ValidationError("gpt model: vertex does not pair to 1 with the unit functional");
    }
    if (independent_rows(vertices_, dim_).size() != dim_)
        throw ValidationError("gpt model: vertices do not span the ambient space");
    dual_ = dual_cone_rays(vertices_, dim_);
}

GPTModel GPTModel::gbit() {
    return GPTModel(3,
                    {{1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}, {-1.0, 1.0, 1.0}, {-1.0, -1.0, 1.0}},
                    {0.0, 0.0, 1.0});
}

GPTModel GPTModel::qubit_octahedron() {
    return GPTModel(4,
                    {{1.0, 1.0, 0.0, 0.0},
                     {1.0, -1.0, 0.0, 0.0},
                     {1.0, 0.0, 1.0, 0.0},
                     {1.0, 0.0, -1.0, 0.0},
                     {1.0, 0.0, 0.0, 1.0},
                     {1.0, 0.0, 0.0, -1.0}},
                    {1.0, 0.0, 0.0, 0.0});
}

std::vector<double> GPTModel::barycenter() const {
    std::vector<double> c(dim_, 0.0);
    for (const std::vector<double>& v : vertices_) add_scaled(c, 1.0, v);
    for (double& x : c) x /= static_cast<double>(vertices_.size());
    return c;
}

bool GPTModel::contains(const std::vector<double>& v, double tol) const {
    if (v.size() != dim_) throw DimensionError("gpt model: membership query dimension mismatch");
    for (const std::vector<double>& d : dual_)
        if (dot(d, v) < -tol) return false;
    return true;
}

double order_unit_norm(const GPTModel& model, const std::vector<double>& z) {
    if (z.size() != model.dim())
        throw DimensionError("order_unit_norm: vector dimension mismatch");
    double best = 0.0;
    for (const std::vector<double>& v : model.vertices())
        best = std::max(best, std::abs(dot(z, v)));
    return best;
}

// ---------------------------------------------------------------------------
// Objects.

GPTState::GPTState(const GPTModel& model, std::vector<double> vec) : vec_(std::move(vec)) {
    if (vec_.size() != model.dim()) throw DimensionError("gpt state: vector dimension mismatch");
    if (std::abs(dot(model.unit(), vec_) - 1.0) > kUnitPairingTol)
        throw ValidationError("gpt state: unit pairing must equal 1");
    if (!model.contains(vec_, kMembershipTol))
        throw ValidationError("gpt state: vector lies outside the state cone");
}

GPTEffect::GPTEffect(const GPTModel& model, std::vector<double> vec) : vec_(std::move(vec)) {
    if (vec_.size() != model.dim()) throw DimensionError("gpt effect: vector dimension mismatch");
    for (const std::vector<double>& v : model.vertices()) {
        const double p = dot(vec_, v);
        if (p < -kMembershipTol || p > 1.0 + kMembershipTol)
            throw ValidationError("gpt effect: pairing with a vertex is out of range");
    }
}

GPTMeasurementSet::GPTMeasurementSet(const GPTModel& model,
                                     std::vector<std::vector<std::vector<double>>> effects)
    : dim_(model.dim()), effects_(std::move(effects)) {
    if (effects_.empty()) throw DimensionError("gpt measurement set: no settings");
    const std::size_t l = effects_.front().size();
    if (l == 0) throw DimensionError("gpt measurement set: no outcomes");
    for (const std::vector<std::vector<double>>& setting : effects_) {
        if (setting.size() != l)
            throw DimensionError("gpt measurement set: ragged outcome counts");
        std::vector<double> sum(dim_, 0.0);
        for (const std::vector<double>& e : setting) {
            GPTEffect checked(model, e);  // validates dimension and range
            add_scaled(sum, 1.0, e);
        }
        for (std::size_t r = 0; r < dim_; ++r)
            if (std::abs(sum[r] - model.unit()[r]) > kCompletenessTol)
                throw ValidationError(
                    "gpt measurement set: effects do not sum to the unit functional");
    }
}

const std::vector<double>& GPTMeasurementSet::effect(std::size_t a, std::size_t x) const {
    if (x >= effects_.size() || a >= effects_.front().size())
        throw DimensionError("gpt measurement set: index out of range");
    return effects_[x][a];
}

GPTSubchannel GPTSubchannel::matrix(const GPTModel& model, std::vector<double> row_major) {
    const std::size_t n = model.dim();
    if (row_major.size() != n * n)
        throw DimensionError("gpt subchannel: matrix must be dim x dim");
    GPTSubchannel sc;
    sc.dim_ = n;
    sc.m_ = std::move(row_major);
    for (const std::vector<double>& v : model.vertices()) {
        const std::vector<double> out = sc.apply(v);
        if (!model.contains(out, kMembershipTol))
            throw ValidationError("gpt subchannel: a vertex leaves the positive cone");
        if (dot(model.unit(), out) > 1.0 + kMembershipTol)
            throw ValidationError("gpt subchannel: map increases the unit pairing");
    }
    return sc;
}

GPTSubchannel GPTSubchannel::measure_prepare(const GPTModel& model,
                                             const std::vector<double>& effect,
                                             const std::vector<double>& preparation) {
    const std::size_t n = model.dim();
    if (effect.size() != n || preparation.size() != n)
        throw DimensionError("gpt subchannel: measure-prepare vectors have the wrong dimension");
    std::vector<double> m(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m[r * n + c] = preparation[r] * effect[c];
    return matrix(model, std::move(m));
}

std::vector<double> GPTSubchannel::apply(const std::vector<double>& v) const {
    if (v.size() != dim_) throw DimensionError("gpt subchannel: input dimension mismatch");
    std::vector<double> out(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s += m_[r * dim_ + c] * v[c];
        out[r] = s;
    }
    return out;
}

GPTInstrumentSet::GPTInstrumentSet(const GPTModel& model,
                                   std::vector<std::vector<GPTSubchannel>> subchannels)
    : dim_(model.dim()), sub_(std::move(subchannels)) {
    if (sub_.empty()) throw DimensionError("gpt instrument set: no settings");
    const std::size_t m = sub_.front().size();
    if (m == 0) throw DimensionError("gpt instrument set: no outcomes");
    for (const std::vector<GPTSubchannel>& setting : sub_) {
        if (setting.size() != m)
            throw DimensionError("gpt instrument set: ragged outcome counts");
        for (const GPTSubchannel& sc : setting)
            if (sc.dim() != dim_)
                throw DimensionError("gpt instrument set: subchannel dimension mismatch");
        for (const std::vector<double>& v : model.vertices()) {
            double total = 0.0;
            for (const GPTSubchannel& sc : setting) total += dot(model.unit(), sc.apply(v));
            if (std::abs(total - 1.0) > kMembershipTol)
                throw ValidationError("gpt instrument set: setting does not sum to a channel");
        }
    }
}

const GPTSubchannel& GPTInstrumentSet::subchannel(std::size_t b, std::size_t y) const {
    if (y >= sub_.size() || b >= sub_.front().size())
        throw DimensionError("gpt instrument set: index out of range");
    return sub_[y][b];
}

GPTGameEnsemble::GPTGameEnsemble(std::vector<double> prior, GPTInstrumentSet instruments,
                                 std::size_t tail_multiplicity)
    : prior_(std::move(prior)), instruments_(std::move(instruments)), tail_(tail_multiplicity) {
    check_prior(prior_, instruments_.settings(), "gpt game");
    if (tail_ == 0) throw ValidationError("gpt game: tail multiplicity must be positive");
}

GameValue gpt_succ_probability(const GPTGameEnsemble& game, const GPTState& omega,
                               const GPTMeasurementSet& e) {
    return evaluate_gpt_game(game, omega, e, true);
}

GameValue gpt_err_probability(const GPTGameEnsemble& game, const GPTState& omega,
                              const GPTMeasurementSet& e) {
    if (game.logical_outcomes() < 2)
        throw ValidationError("gpt_err_probability: exclusion needs at least two outcomes");
    return evaluate_gpt_game(game, omega, e, false);
}

GPTFreeStateSet GPTFreeStateSet::polytope(std::vector<std::vector<double>> generators) {
    GPTFreeStateSet f;
    f.generators = std::move(generators);
    return f;
}

GPTFreeMeasurementFamily GPTFreeMeasurementFamily::compatible() {
    return GPTFreeMeasurementFamily{};
}

// ---------------------------------------------------------------------------
// Quantifiers. Each solves the decomposition form and the witness form as
// two independent linear programs; the reported value comes from the witness
// program and the pair must agree within 1e-6 or the call is rejected.

GPTQuantifierResult gpt_robustness_state(const GPTModel& model, const GPTState& omega,
                                         const GPTFreeStateSet& f) {
    const std::string what = "gpt robustness (state)";
    const std::vector<std::vector<double>> sigmas = free_state_extremes(model, f, what);
    const std::vector<std::vector<double>>& gens = model.dual_generators();
    const std::size_t n = model.dim(), dd = gens.size(), kk = sigmas.size();

    // Witness form: max <z, omega> - 1 with z in the dual cone and
    // <z, sigma_k> <= 1 on the free generators.
    ProgramBuilder wb;
    const std::size_t c_var = wb.add_nonneg_var(dd);
    const std::size_t slack_var = wb.add_nonneg_var(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        const std::size_t row = wb.add_scalar_constraint(1.0);
        for (std::size_t j = 0; j < dd; ++j) {
            const double coeff = dot(gens[j], sigmas[k]);
            if (coeff != 0.0) wb.add_scalar_term(row, c_var, j, coeff);
        }
        wb.add_scalar_term(row, slack_var, k, 1.0);
    }
    for (std::size_t j = 0; j < dd; ++j) {
        const double coeff = dot(gens[j], omega.vector());
        if (coeff != 0.0) wb.add_objective_term(c_var, j, -coeff);
    }
    GPTQuantifierResult result;
    result.kind = QuantifierKind::RobustnessState;
    const Solution wsol = solve_accepted(wb.build(), what, &result.diagnostics);
    result.dual_value = -wsol.primal_value - 1.0;

    // Decomposition form: min sum_k m_k - 1 with
    // sum_k m_k sigma_k - omega in the positive cone.
    ProgramBuilder pb;
    const std::size_t m_var = pb.add_nonneg_var(kk);
    const std::size_t t_var = pb.add_nonneg_var(model.num_vertices());
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t row = pb.add_scalar_constraint(omega.vector()[r]);
        for (std::size_t k = 0; k < kk; ++k)
            if (sigmas[k][r] != 0.0) pb.add_scalar_term(row, m_var, k, sigmas[k][r]);
        for (std::size_t i = 0; i < model.num_vertices(); ++i)
            if (model.vertices()[i][r] != 0.0)
                pb.add_scalar_term(row, t_var, i, -model.vertices()[i][r]);
    }
    for (std::size_t k = 0; k < kk; ++k) pb.add_objective_term(m_var, k, 1.0);
    const Solution psol = solve_accepted(pb.build(), what, nullptr);
    result.primal_value = psol.primal_value - 1.0;

    if (std::abs(result.primal_value - result.dual_value) > kDualityGuard)
        throw SolverError(what + ": decomposition and witness optima disagree");
    result.value = result.dual_value;

    std::vector<double> z(n, 0.0);
    for (std::size_t j = 0; j < dd; ++j)
        add_scaled(z, wb.scalar_value(wsol.x, c_var, j), gens[j]);
    double extremal = 0.0;
    for (const std::vector<double>& sigma : sigmas) extremal = std::max(extremal, dot(z, sigma));
    if (extremal <= 1e-10)
        throw DegenerateWitnessError(what + ": extremal free pairing vanished");
    result.witness = scaled(1.0 / extremal, z);
    return result;
}

GPTQuantifierResult gpt_weight_state(const GPTModel& model, const GPTState& omega,
                                     const GPTFreeStateSet& f) {
    const std::string what = "gpt weight (state)";
    const std::vector<std::vector<double>> sigmas = free_state_extremes(model, f, what);
    const std::vector<std::vector<double>>& gens = model.dual_generators();
    const std::size_t n = model.dim(), dd = gens.size(), kk = sigmas.size();

    // Witness form: 1 - min <y, omega> with y in the dual cone and
    // <y, sigma_k> >= 1 on the free generators.
    ProgramBuilder wb;
    const std::size_t c_var = wb.add_nonneg_var(dd);
    const std::size_t surplus_var = wb.add_nonneg_var(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        const std::size_t row = wb.add_scalar_constraint(1.0);
        for (std::size_t j = 0; j < dd; ++j) {
            const double coeff = dot(gens[j], sigmas[k]);
            if (coeff != 0.0) wb.add_scalar_term(row, c_var, j, coeff);
        }
        wb.add_scalar_term(row, surplus_var, k, -1.0);
    }
    for (std::size_t j = 0; j < dd; ++j) {
        const double coeff = dot(gens[j], omega.vector());
        if (coeff != 0.0) wb.add_objective_term(c_var, j, coeff);
    }
    GPTQuantifierResult result;
    result.kind = QuantifierKind::WeightState;
    const Solution wsol = solve_accepted(wb.build(), what, &result.diagnostics);
    result.dual_value = 1.0 - wsol.primal_value;

    // Decomposition form: 1 - max sum_k m_k with
    // omega - sum_k m_k sigma_k in the positive cone.
    ProgramBuilder pb;
    const std::size_t m_var = pb.add_nonneg_var(kk);
    const std::size_t t_var = pb.add_nonneg_var(model.num_vertices());
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t row = pb.add_scalar_constraint(omega.vector()[r]);
        for (std::size_t k = 0; k < kk; ++k)
            if (sigmas[k][r] != 0.0) pb.add_scalar_term(row, m_var, k, sigmas[k][r]);
        for (std::size_t i = 0; i < model.num_vertices(); ++i)
            if (model.vertices()[i][r] != 0.0)
                pb.add_scalar_term(row, t_var, i, model.vertices()[i][r]);
    }
    for (std::size_t k = 0; k < kk; ++k) pb.add_objective_term(m_var, k, -1.0);
    const Solution psol = solve_accepted(pb.build(), what, nullptr);
    result.primal_value = 1.0 + psol.primal_value;

    if (std::abs(result.primal_value - result.dual_value) > kDualityGuard)
        throw SolverError(what + ": decomposition and witness optima disagree");
    result.value = result.dual_value;

    std::vector<double> y(n, 0.0);
    for (std::size_t j = 0; j < dd; ++j)
        add_scaled(y, wb.scalar_value(wsol.x, c_var, j), gens[j]);
    double extremal = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& sigma : sigmas) extremal = std::min(extremal, dot(y, sigma));
    if (extremal <= 1e-10)
        throw DegenerateWitnessError(what + ": extremal free pairing vanished");
    result.witness = scaled(1.0 / extremal, y);
    return result;
}

double gpt_compatible_pairing_bound(const GPTModel& model,
                                    const std::vector<std::vector<double>>& weights,
                                    bool maximize) {
    if (weights.empty())
        throw ValidationError("gpt_compatible_pairing_bound: at least one weight is required");
    for (const std::vector<double>& w : weights)
        if (w.size() != model.dim())
            throw DimensionError("gpt_compatible_pairing_bound: weight dimension mismatch");
    const std::vector<std::vector<double>>& gens = model.dual_generators();
    const std::size_t n = model.dim(), dd = gens.size(), ll = weights.size();

    // Extremize sum_lambda <g_lambda, w_lambda> over parents: g_lambda in the
    // dual cone with sum_lambda g_lambda = u.
    ProgramBuilder pb;
    const std::size_t c_var = pb.add_nonneg_var(ll * dd);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t row = pb.add_scalar_constraint(model.unit()[r]);
        for (std::size_t lam = 0; lam < ll; ++lam)
            for (std::size_t j = 0; j < dd; ++j)
                if (gens[j][r] != 0.0)
                    pb.add_scalar_term(row, c_var, lam * dd + j, gens[j][r]);
    }
    const double sign = maximize ? -1.0 : 1.0;
    for (std::size_t lam = 0; lam < ll; ++lam)
        for (std::size_t j = 0; j < dd; ++j) {
            const double coeff = dot(gens[j], weights[lam]);
            if (coeff != 0.0) pb.add_objective_term(c_var, lam * dd + j, sign * coeff);
        }
    const Solution sol = solve_accepted(pb.build(), "gpt_compatible_pairing_bound", nullptr);
    return maximize ? -sol.primal_value : sol.primal_value;
}

GPTQuantifierResult gpt_robustness_mset(const GPTModel& model, const GPTMeasurementSet& e,
                                        const GPTFreeMeasurementFamily& ff) {
    (void)ff;  // single variant: the compatible sets
    const std::string what = "gpt robustness (measurement set)";
    if (e.dim() != model.dim())
        throw DimensionError(what + ": measurement set dimension mismatch");
    const std::size_t kappa = e.settings(), l = e.outcomes(), n = model.dim();
    const CompatibilityModel cm(kappa, l);
    const std::size_t ll = cm.num_lambdas();
    const std::vector<std::vector<double>>& verts = model.vertices();
    const std::vector<std::vector<double>>& gens = model.dual_generators();
    const std::size_t vv = verts.size(), dd = gens.size();
    const auto widx = [l, vv](std::size_t x, std::size_t a, std::size_t i) {
        return (x * l + a) * vv + i;
    };

    // Witness form: max sum_{x,a} <e_{a|x}, z_{a,x}> - 1 with z_{a,x} in the
    // positive cone and every compatible pairing at most 1. The compatible
    // bound is enforced through its parent-program dual: a functional h with
    // h - sum_x z_{r(lambda,x),x} in the positive cone and <h, u> <= 1.
    ProgramBuilder wb;
    const std::size_t w_var = wb.add_nonneg_var(kappa * l * vv);
    const std::size_t hp_var = wb.add_nonneg_var(n);
    const std::size_t hm_var = wb.add_nonneg_var(n);
    const std::size_t c_var = wb.add_nonneg_var(ll * vv);
    const std::size_t s_var = wb.add_nonneg_var(1);
    for (std::size_t lam = 0; lam < ll; ++lam)
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t row = wb.add_scalar_constraint(0.0);
            wb.add_scalar_term(row, hp_var, r, 1.0);
            wb.add_scalar_term(row, hm_var, r, -1.0);
            for (std::size_t x = 0; x < kappa; ++x) {
                const std::size_t a = cm.response(lam, x);
                for (std::size_t i = 0; i < vv; ++i)
                    if (verts[i][r] != 0.0)
                        wb.add_scalar_term(row, w_var, widx(x, a, i), -verts[i][r]);
            }
            for (std::size_t i = 0; i < vv; ++i)
                if (verts[i][r] != 0.0) wb.add_scalar_term(row, c_var, lam * vv + i, -verts[i][r]);
        }
    {
        const std::size_t row = wb.add_scalar_constraint(1.0);
        for (std::size_t r = 0; r < n; ++r) {
            if (model.unit()[r] == 0.0) continue;
            wb.add_scalar_term(row, hp_var, r, model.unit()[r]);
            wb.add_scalar_term(row, hm_var, r, -model.unit()[r]);
        }
        wb.add_scalar_term(row, s_var, 0, 1.0);
    }
    for (std::size_t x = 0; x < kappa; ++x)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t i = 0; i < vv; ++i) {
                const double coeff = dot(e.effect(a, x), verts[i]);
                if (coeff != 0.0) wb.add_objective_term(w_var, widx(x, a, i), -coeff);
            }
    GPTQuantifierResult result;
    result.kind = QuantifierKind::RobustnessPOVMSet;
    const Solution wsol = solve_accepted(wb.build(), what, &result.diagnostics);
    result.dual_value = -wsol.primal_value - 1.0;

    // Decomposition form: min r such that e_{a|x} + (noise) = coarse-grained
    // parent of total weight 1 + r.
    ProgramBuilder pb;
    const std::size_t g_var = pb.add_nonneg_var(ll * dd);
    const std::size_t r_var = pb.add_nonneg_var(1);
    const std::size_t s2_var = pb.add_nonneg_var(kappa * l * vv);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t row = pb.add_scalar_constraint(model.unit()[r]);
        for (std::size_t lam = 0; lam < ll; ++lam)
            for (std::size_t j = 0; j < dd; ++j)
                if (gens[j][r] != 0.0)
                    pb.add_scalar_term(row, g_var, lam * dd + j, gens[j][r]);
        if (model.unit()[r] != 0.0) pb.add_scalar_term(row, r_var, 0, -model.unit()[r]);
    }
    for (std::size_t x = 0; x < kappa; ++x)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t i = 0; i < vv; ++i) {
                const std::size_t row = pb.add_scalar_constraint(dot(e.effect(a, x), verts[i]));
                for (std::size_t lam = 0; lam < ll; ++lam) {
                    if (cm.response(lam, x) != a) continue;
                    for (std::size_t j = 0; j < dd; ++j) {
                        const double coeff = dot(gens[j], verts[i]);
                        if (coeff != 0.0) pb.add_scalar_term(row, g_var, lam * dd + j, coeff);
                    }
                }
                pb.add_scalar_term(row, s2_var, widx(x, a, i), -1.0);
            }
    pb.add_objective_term(r_var, 0, 1.0);
    const Solution psol = solve_accepted(pb.build(), what, nullptr);
    result.primal_value = psol.primal_value;

    if (std::abs(result.primal_value - result.dual_value) > kDualityGuard)
        throw SolverError(what + ": decomposition and witness optima disagree");
    result.value = result.dual_value;

    std::vector<std::vector<std::vector<double>>> zs(
        kappa, std::vector<std::vector<double>>(l, std::vector<double>(n, 0.0)));
    for (std::size_t x = 0; x < kappa; ++x)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t i = 0; i < vv; ++i)
                add_scaled(zs[x][a], wb.scalar_value(wsol.x, w_var, widx(x, a, i)), verts[i]);
    std::vector<std::vector<double>> omegas(ll, std::vector<double>(n, 0.0));
    for (std::size_t lam = 0; lam < ll; ++lam)
        for (std::size_t x = 0; x < kappa; ++x)
            add_scaled(omegas[lam], 1.0, zs[x][cm.response(lam, x)]);
    const double extremal = gpt_compatible_pairing_bound(model, omegas, true);
    if (extremal <= 1e-10)
        throw DegenerateWitnessError(what + ": extremal compatible pairing vanished");
    for (auto& setting : zs)
        for (auto& z : setting)
            for (double& x : z) x /= extremal;
    result.witness_set = std::move(zs);
    return result;
}

GPTQuantifierResult gpt_weight_mset(const GPTModel& model, const GPTMeasurementSet& e,
                                    const GPTFreeMeasurementFamily& ff) {
    (void)ff;  // single variant: the compatible sets
    const std::string what = "gpt weight (measurement set)";
    if (e.dim() != model.dim())
        throw DimensionError(what + ": measurement set dimension mismatch");
    const std::size_t kappa = e.settings(), l = e.outcomes(), n = model.dim();
    const CompatibilityModel cm(kappa, l);
    const std::size_t ll = cm.num_lambdas();
    const std::vector<std::vector<double>>& verts = model.vertices();
    const std::vector<std::vector<double>>& gens = model.dual_generators();
    const std::size_t vv = verts.size(), dd = gens.size();
    const auto widx = [l, vv](std::size_t x, std::size_t a, std::size_t i) {
        return (x * l + a) * vv + i;
    };

    // Witness form: 1 - min sum_{x,a} <e_{a|x}, y_{a,x}> with y_{a,x} in the
    // positive cone and every compatible pairing at least 1, enforced through
    // a functional h with sum_x y_{r(lambda,x),x} - h in the positive cone
    // and <h, u> >= 1.
    ProgramBuilder wb;
    const std::size_t w_var = wb.add_nonneg_var(kappa * l * vv);
    const std::size_t hp_var = wb.add_nonneg_var(n);
    const std::size_t hm_var = wb.add_nonneg_var(n);
    const std::size_t c_var = wb.add_nonneg_var(ll * vv);
    const std::size_t s_var = wb.add_nonneg_var(1);
    for (std::size_t lam = 0; lam < ll; ++lam)
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t row = wb.add_scalar_constraint(0.0);
            for (std::size_t x = 0; x < kappa; ++x) {
                const std::size_t a = cm.response(lam, x);
                for (std::size_t i = 0; i < vv; ++i)
                    if (verts[i][r] != 0.0)
                        wb.add_scalar_term(row, w_var, widx(x, a, i), verts[i][r]);
            }
            wb.add_scalar_term(row, hp_var, r, -1.0);
            wb.add_scalar_term(row, hm_var, r, 1.0);
            for (std::size_t i = 0; i < vv; ++i)
                if (verts[i][r] != 0.0) wb.add_scalar_term(row, c_var, lam * vv + i, -verts[i][r]);
        }
    {
        const std::size_t row = wb.add_scalar_constraint(1.0);
        for (std::size_t r = 0; r < n; ++r) {
            if (model.unit()[r] == 0.0) continue;
            wb.add_scalar_term(row, hp_var, r, model.unit()[r]);
            wb.add_scalar_term(row, hm_var, r, -model.unit()[r]);
        }
        wb.add_scalar_term(row, s_var, 0, -1.0);
    }
    for (std::size_t x = 0; x < kappa; ++x)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t i = 0; i < vv; ++i) {
                const double coeff = dot(e.effect(a, x), verts[i]);
                if (coeff != 0.0) wb.add_objective_term(w_var, widx(x, a, i), coeff);
            }
    GPTQuantifierResult result;
    result.kind = QuantifierKind::WeightPOVMSet;
    const Solution wsol = solve_accepted(wb.build(), what, &result.diagnostics);
    result.dual_value = 1.0 - wsol.primal_value;

    // Decomposition form: max t such that a parent of total weight t
    // coarse-grains into a lower bound of the measurement set.
    ProgramBuilder pb;
    const std::size_t g_var = pb.add_nonneg_var(ll * dd);
    const std::size_t t_var = pb.add_nonneg_var(1);
    const std::size_t s2_var = pb.add_nonneg_var(kappa * l * vv);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t row = pb.add_scalar_constraint(0.0);
        for (std::size_t lam = 0; lam < ll; ++lam)
            for (std::size_t j = 0; j < dd; ++j)
                if (gens[j][r] != 0.0)
                    pb.add_scalar_term(row, g_var, lam * dd + j, gens[j][r]);
        if (model.unit()[r] != 0.0) pb.add_scalar_term(row, t_var, 0, -model.unit()[r]);
    }
    for (std::size_t x = 0; x < kappa; ++x)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t i = 0; i < vv; ++i) {
                const std::size_t row = pb.add_scalar_constraint(dot(e.effect(a, x), verts[i]));
                for (std::size_t lam = 0; lam < ll; ++lam) {
                    if (cm.response(lam, x) != a) continue;
                    for (std::size_t j = 0; j < dd; ++j) {
                        const double coeff = dot(gens[j], verts[i]);
                        if (coeff != 0.0) pb.add_scalar_term(row, g_var, lam * dd + j, coeff);
                    }
                }
                pb.add_scalar_term(row, s2_var, widx(x, a, i), 1.0);
            }
    pb.add_objective_term(t_var, 0, -1.0);
    const Solution psol = solve_accepted(pb.build(), what, nullptr);
    result.primal_value = 1.0 + psol.primal_value;

    if (std::abs(result.primal_value - result.dual_value) > kDualityGuard)
        throw SolverError(what + ": decomposition and witness optima disagree");
    result.value = result.dual_value;

    std::vector<std::vector<std::vector<double>>> ys(
        kappa, std::vector<std::vector<double>>(l, std::vector<double>(n, 0.0)));
    for (std::size_t x = 0; x < kappa; ++x)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t i = 0; i < vv; ++i)
                add_scaled(ys[x][a], wb.scalar_value(wsol.x, w_var, widx(x, a, i)), verts[i]);
    std::vector<std::vector<double>> omegas(ll, std::vector<double>(n, 0.0));
    for (std::size_t lam = 0; lam < ll; ++lam)
        for (std::size_t x = 0; x < kappa; ++x)
            add_scaled(omegas[lam], 1.0, ys[x][cm.response(lam, x)]);
    const double extremal = gpt_compatible_pairing_bound(model, omegas, false);
    if (extremal <= 1e-10)
        throw DegenerateWitnessError(what + ": extremal compatible pairing vanished");
    for (auto& setting : ys)
        for (auto& y : setting)
            for (double& x : y) x /= extremal;
    result.witness_set = std::move(ys);
    return result;
}

// ---------------------------------------------------------------------------
// Game constructions.

std::pair<GPTGameEnsemble, GPTDiscGameCertificate> build_gpt_disc_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff, const std::vector<double>& p_x,
    std::size_t j, const GPTState& chi) {
    const std::size_t n = model.dim();
    const std::size_t l = e.outcomes();
    if (e.dim() != n || omega.dim() != n)
        throw DimensionError("build_gpt_disc_game: state and measurement set dimensions differ");
    if (chi.dim() != n)
        throw DimensionError("build_gpt_disc_game: chi dimension does not match the state");
    if (j == 0) throw ValidationError("build_gpt_disc_game: j must be positive");
    check_prior(p_x, e.settings(), "build_gpt_disc_game");

    GPTQuantifierResult sr = gpt_robustness_state(model, omega, f);
    GPTQuantifierResult mr = gpt_robustness_mset(model, e, ff);
    if (sr.value <= kFreeValueTol && mr.value <= kFreeValueTol)
        throw FreeInputGameError(
            "build_gpt_disc_game: both objects are free, so no discrimination advantage exists");

    const double z_norm = order_unit_norm(model, sr.witness);
    const std::vector<double> t = witness_setting_scales(model, mr.witness_set, p_x);
    double tr_zm = 0.0;
    for (double v : t) tr_zm += v;
    if (!(z_norm > 0.0) || !(tr_zm > 0.0))
        throw SolverError("build_gpt_disc_game: witness normalization degenerated");
    const double alpha = 1.0 / (z_norm * tr_zm);
    if (alpha + 1.0 / static_cast<double>(j) > 1.0 + 1e-9)
        throw ValidationError("build_gpt_disc_game: j too small, alpha + 1/j exceeds 1");

    std::vector<std::vector<GPTSubchannel>> sub;
    sub.reserve(e.settings());
    for (std::size_t y = 0; y < e.settings(); ++y) {
        std::vector<GPTSubchannel> setting;
        setting.reserve(l + 1);
        const std::vector<double> effect = scaled(alpha, sr.witness);
        for (std::size_t b = 0; b < l; ++b)
            setting.push_back(GPTSubchannel::measure_prepare(
                model, effect, scaled(1.0 / p_x[y], mr.witness_set[y][b])));
        // Sum of the j identical garbage branches eta -> (1/j)(1 - F_y(eta)) chi.
        std::vector<double> tail_effect = model.unit();
        add_scaled(tail_effect, -alpha * t[y], sr.witness);
        setting.push_back(GPTSubchannel::measure_prepare(model, tail_effect, chi.vector()));
        sub.push_back(std::move(setting));
    }
    GPTGameEnsemble game(p_x, GPTInstrumentSet(model, std::move(sub)), j);

    for (std::size_t rep = 0; rep < kProbeStates; ++rep) {
        const GPTState eta = gpt_random_state(model, kProbeSeed + rep);
        const double pairing = dot(sr.witness, eta.vector());
        for (std::size_t y = 0; y < e.settings(); ++y)
            if (alpha * t[y] * pairing > 1.0 + 1e-9)
                throw SolverError(
                    "build_gpt_disc_game: sampled F_y exceeded 1, witness scale is inconsistent");
    }

    GPTDiscGameCertificate cert{alpha,    j,        chi,      sr.witness,
                                mr.witness_set, sr.value, mr.value, p_x};
    return {std::move(game), std::move(cert)};
}

std::pair<GPTGameEnsemble, GPTDiscGameCertificate> build_gpt_disc_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff, const std::vector<double>& p_x,
    std::size_t j) {
    return build_gpt_disc_game(model, omega, e, f, ff, p_x, j,
                               GPTState(model, model.barycenter()));
}

std::pair<GPTGameEnsemble, GPTExclGameCertificate> build_gpt_excl_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff, const std::vector<double>& p_x,
    const std::vector<std::vector<double>>& pb_given_y) {
    const std::size_t n = model.dim();
    const std::size_t l = e.outcomes();
    if (e.dim() != n || omega.dim() != n)
        throw DimensionError("build_gpt_excl_game: state and measurement set dimensions differ");
    check_prior(p_x, e.settings(), "build_gpt_excl_game");
    if (pb_given_y.size() != e.settings())
        throw DimensionError("build_gpt_excl_game: conditional PMF has the wrong number of settings");
    for (const std::vector<double>& row : pb_given_y) {
        if (row.size() != l)
            throw DimensionError(
                "build_gpt_excl_game: conditional PMF has the wrong number of outcomes");
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0)
                throw ValidationError(
                    "build_gpt_excl_game: conditional PMF entries must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kPmfTol)
            throw ValidationError("build_gpt_excl_game: conditional PMF rows must sum to 1");
    }

    GPTQuantifierResult sr = gpt_weight_state(model, omega, f);
    GPTQuantifierResult mr = gpt_weight_mset(model, e, ff);
    if (sr.value <= kFreeValueTol && mr.value <= kFreeValueTol)
        throw FreeInputGameError(
            "build_gpt_excl_game: both objects are free, so no exclusion advantage exists");

    const double y_norm = order_unit_norm(model, sr.witness);
    const std::vector<double> u_y = witness_setting_scales(model, mr.witness_set, p_x);
    double tr_ym = 0.0;
    for (double v : u_y) tr_ym += v;
    if (!(y_norm > 0.0) || !(tr_ym > 0.0))
        throw SolverError("build_gpt_excl_game: witness normalization degenerated");
    const double beta = 1.0 / (2.0 * y_norm * tr_ym);

    std::vector<GPTState> xi_states;
    std::vector<bool> xi_degenerate;
    xi_states.reserve(e.settings());
    xi_degenerate.reserve(e.settings());
    for (std::size_t y = 0; y < e.settings(); ++y) {
        std::vector<double> mix(n, 0.0);
        for (std::size_t b = 0; b < l; ++b) add_scaled(mix, pb_given_y[y][b], mr.witness_set[y][b]);
        const double den = dot(model.unit(), mix);
        if (den < kXiDegenerateTol) {
            xi_states.emplace_back(model, model.barycenter());
            xi_degenerate.push_back(true);
        } else {
            xi_states.emplace_back(model, scaled(1.0 / den, mix));
            xi_degenerate.push_back(false);
        }
    }

    std::vector<std::vector<GPTSubchannel>> sub;
    sub.reserve(e.settings());
    for (std::size_t y = 0; y < e.settings(); ++y) {
        std::vector<GPTSubchannel> setting;
        setting.reserve(l + 1);
        const std::vector<double> effect = scaled(beta, sr.witness);
        for (std::size_t b = 0; b < l; ++b)
            setting.push_back(GPTSubchannel::measure_prepare(
                model, effect, scaled(1.0 / p_x[y], mr.witness_set[y][b])));
        // Final branch eta -> (1 - G_y(eta)) xi_y.
        std::vector<double> tail_effect = model.unit();
        add_scaled(tail_effect, -beta * u_y[y], sr.witness);
        setting.push_back(
            GPTSubchannel::measure_prepare(model, tail_effect, xi_states[y].vector()));
        sub.push_back(std::move(setting));
    }
    GPTGameEnsemble game(p_x, GPTInstrumentSet(model, std::move(sub)));

    for (std::size_t rep = 0; rep < kProbeStates; ++rep) {
        const GPTState eta = gpt_random_state(model, kProbeSeed + rep);
        const double pairing = dot(sr.witness, eta.vector());
        for (std::size_t y = 0; y < e.settings(); ++y)
            if (beta * u_y[y] * pairing > 0.5 + 1e-9)
                throw SolverError(
                    "build_gpt_excl_game: sampled G_y exceeded 1/2, witness scale is inconsistent");
    }

    GPTExclGameCertificate cert{beta,     xi_states, xi_degenerate, pb_given_y, sr.witness,
                                mr.witness_set, sr.value,  mr.value,      p_x};
    return {std::move(game), std::move(cert)};
}

std::pair<GPTGameEnsemble, GPTExclGameCertificate> build_gpt_excl_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff,
    const std::vector<double>& p_x) {
    const std::vector<std::vector<double>> uniform(
        e.settings(), std::vector<double>(e.outcomes(), 1.0 / static_cast<double>(e.outcomes())));
    return build_gpt_excl_game(model, omega, e, f, ff, p_x, uniform);
}

// ---------------------------------------------------------------------------
// Sampling, enumeration, verification.

std::vector<std::pair<GPTState, GPTMeasurementSet>> gpt_sample_free_pairs(
    const GPTModel& model, const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff,
    std::size_t settings, std::size_t outcomes, std::size_t n, std::uint64_t seed) {
    (void)ff;
    if (settings == 0 || outcomes == 0)
        throw DimensionError("gpt_sample_free_pairs: measurement shape must be positive");
    const std::vector<std::vector<double>> sigmas =
        free_state_extremes(model, f, "gpt_sample_free_pairs");
    const CompatibilityModel cm(settings, outcomes);
    const std::size_t ll = cm.num_lambdas();
    Rng rng(seed);
    std::vector<std::pair<GPTState, GPTMeasurementSet>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> mix = rng.full_support_pmf(sigmas.size());
        std::vector<double> state(model.dim(), 0.0);
        for (std::size_t k = 0; k < sigmas.size(); ++k) add_scaled(state, mix[k], sigmas[k]);
        // Random parent measurement followed by a random deterministic
        // post-processing: compatible by construction.
        const GPTMeasurementSet parent = gpt_random_measurement_set(model, 1, ll, rng.raw());
        std::vector<std::vector<std::vector<double>>> effects(
            settings,
            std::vector<std::vector<double>>(outcomes, std::vector<double>(model.dim(), 0.0)));
        for (std::size_t x = 0; x < settings; ++x)
            for (std::size_t lam = 0; lam < ll; ++lam) {
                const std::size_t a = rng.index_below(outcomes);
                add_scaled(effects[x][a], 1.0, parent.effect(lam, 0));
            }
        out.emplace_back(GPTState(model, std::move(state)),
                         GPTMeasurementSet(model, std::move(effects)));
    }
    return out;
}

double gpt_best_free_response(const GPTModel& model, const GPTGameEnsemble& game,
                              const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff,
                              std::size_t settings, std::size_t outcomes, bool maximize) {
    (void)ff;
    const GPTInstrumentSet& inst = game.instruments();
    if (settings == 0 || outcomes == 0)
        throw DimensionError("gpt_best_free_response: measurement shape must be positive");
    const std::vector<std::vector<double>> sigmas =
        free_state_extremes(model, f, "gpt_best_free_response");
    const CompatibilityModel cm(settings, outcomes);
    const std::size_t ll = cm.num_lambdas();
    const std::size_t tau = inst.settings();
    const std::size_t stored = inst.outcomes();
    const std::size_t count_x = ipow_capped(settings, tau, "gpt_best_free_response");
    const std::size_t count_g = ipow_capped(stored, outcomes * tau, "gpt_best_free_response");
    if (count_x > kStrategyCap / count_g)
        throw EnumerationCapError(
            "gpt_best_free_response: deterministic strategy space exceeds the cap");
    const double tail_scale = 1.0 / static_cast<double>(game.tail_multiplicity());

    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    auto consider = [&](double v) {
        if (maximize ? v > best : v < best) best = v;
    };

    for (const std::vector<double>& sigma : sigmas) {
        // Weighted subchannel outputs, tail branch scaled to one logical copy.
        std::vector<std::vector<std::vector<double>>> outs(tau);
        for (std::size_t y = 0; y < tau; ++y) {
            outs[y].reserve(stored);
            for (std::size_t b = 0; b < stored; ++b) {
                std::vector<double> o = inst.subchannel(b, y).apply(sigma);
                const double scale = (game.tail_multiplicity() > 1 && b + 1 == stored)
                                         ? game.prior()[y] * tail_scale
                                         : game.prior()[y];
                for (double& x : o) x *= scale;
                outs[y].push_back(std::move(o));
            }
        }
        std::vector<std::size_t> x_of_y(tau, 0);
        for (std::size_t xs = 0; xs < count_x; ++xs) {
            std::size_t rem = xs;
            for (std::size_t y = 0; y < tau; ++y) {
                x_of_y[y] = rem % settings;
                rem /= settings;
            }
            std::vector<std::size_t> g(outcomes * tau, 0);  // [y*outcomes + a] -> b
            for (std::size_t gs = 0; gs < count_g; ++gs) {
                std::size_t grem = gs;
                for (std::size_t k = 0; k < outcomes * tau; ++k) {
                    g[k] = grem % stored;
                    grem /= stored;
                }
                std::vector<std::vector<double>> w(ll, std::vector<double>(model.dim(), 0.0));
                for (std::size_t lam = 0; lam < ll; ++lam)
                    for (std::size_t y = 0; y < tau; ++y) {
                        const std::size_t a = cm.response(lam, x_of_y[y]);
                        add_scaled(w[lam], 1.0, outs[y][g[y * outcomes + a]]);
                    }
                consider(gpt_compatible_pairing_bound(model, w, maximize));
            }
        }
    }
    return best;
}

VerificationReport verify_gpt_advantage(const GPTModel& model, const GPTState& omega,
                                        const GPTMeasurementSet& e, const GPTFreeStateSet& f,
                                        const GPTFreeMeasurementFamily& ff, std::size_t j,
                                        std::size_t n_samples, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto ms_between = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    if (n_samples == 0)
        throw ValidationError("verify_gpt_advantage: need at least one sample");
    const auto t0 = clock::now();
    const std::size_t kappa = e.settings();
    const std::size_t l = e.outcomes();
    const std::vector<double> p_x(kappa, 1.0 / static_cast<double>(kappa));

    auto [disc_game, disc_cert] = build_gpt_disc_game(model, omega, e, f, ff, p_x, j);
    auto [excl_game, excl_cert] = build_gpt_excl_game(model, omega, e, f, ff, p_x);
    const auto t_built = clock::now();

    DiscriminationReport disc;
    disc.state_robustness = disc_cert.state_robustness;
    disc.set_robustness = disc_cert.set_robustness;
    disc.alpha = disc_cert.alpha;
    disc.j = j;
    disc.numerator = gpt_succ_probability(disc_game, omega, e).value;
    disc.analytic_denominator = disc_cert.alpha + 1.0 / static_cast<double>(j);
    disc.ratio_lower = disc.numerator / disc.analytic_denominator;
    disc.target = (1.0 + disc.state_robustness) * (1.0 + disc.set_robustness);
    disc.identity_ok = disc.numerator >= disc_cert.alpha * disc.target - 1e-7;
    disc.ratio_ok =
        disc.ratio_lower >= disc.target * (1.0 - 2.0 / static_cast<double>(j) - 1e-6);

    ExclusionReport excl;
    excl.state_weight = excl_cert.state_weight;
    excl.set_weight = excl_cert.set_weight;
    excl.beta = excl_cert.beta;
    excl.numerator = gpt_err_probability(excl_game, omega, e).value;
    excl.target = (1.0 - excl.state_weight) * (1.0 - excl.set_weight);
    excl.analytic_bound = excl_cert.beta * excl.target;
    excl.ratio_upper = excl.numerator / excl_cert.beta;
    excl.identity_ok = excl.numerator <= excl.analytic_bound + 1e-7;
    excl.ratio_ok = excl.ratio_upper <= excl.target + 1e-6;

    // One deterministic stream feeds both branches: the discrimination sample
    // seed, its generic-game inputs, then the exclusion counterparts.
    Rng rng(seed);
    struct GenericInput {
        std::vector<double> prior;
        std::uint64_t seed = 0;
    };
    const std::uint64_t disc_sample_seed = rng.raw();
    std::vector<GenericInput> disc_gin(kGenericGames);
    for (GenericInput& gi : disc_gin) {
        gi.prior = rng.full_support_pmf(kappa);
        gi.seed = rng.raw();
    }
    const std::uint64_t excl_sample_seed = rng.raw();
    std::vector<GenericInput> excl_gin(kGenericGames);
    for (GenericInput& gi : excl_gin) {
        gi.prior = rng.full_support_pmf(kappa);
        gi.seed = rng.raw();
    }

    const auto disc_pairs =
        gpt_sample_free_pairs(model, f, ff, kappa, l, n_samples, disc_sample_seed);
    disc.sample_values.assign(n_samples, 0.0);
    parallel_for(n_samples, [&](std::size_t i) {
        disc.sample_values[i] =
            gpt_succ_probability(disc_game, disc_pairs[i].first, disc_pairs[i].second).value;
    });
    disc.empirical_denominator =
        *std::max_element(disc.sample_values.begin(), disc.sample_values.end());
    disc.empirical_ok = disc.empirical_denominator <= disc.analytic_denominator + 1e-9;

    const auto excl_pairs =
        gpt_sample_free_pairs(model, f, ff, kappa, l, n_samples, excl_sample_seed);
    excl.sample_values.assign(n_samples, 0.0);
    parallel_for(n_samples, [&](std::size_t i) {
        excl.sample_values[i] =
            gpt_err_probability(excl_game, excl_pairs[i].first, excl_pairs[i].second).value;
    });
    excl.empirical_minimum =
        *std::min_element(excl.sample_values.begin(), excl.sample_values.end());
    excl.empirical_ok = excl.empirical_minimum >= excl_cert.beta - 1e-9;
    const auto t_sampled = clock::now();

    disc.generic_games.assign(kGenericGames, GenericGameCheck{});
    parallel_for(kGenericGames, [&](std::size_t g) {
        const GPTGameEnsemble random_game(
            disc_gin[g].prior,
            gpt_random_instrument_set(model, kappa, kGenericOutcomes, disc_gin[g].seed));
        GenericGameCheck check;
        check.resourceful_value = gpt_succ_probability(random_game, omega, e).value;
        check.best_free_value = gpt_best_free_response(model, random_game, f, ff, kappa, l, true);
        check.ok = check.resourceful_value <= disc.target * (1.0 + 1e-6) * check.best_free_value;
        disc.generic_games[g] = check;
    });
    disc.generic_ok = std::all_of(disc.generic_games.begin(), disc.generic_games.end(),
                                  [](const GenericGameCheck& c) { return c.ok; });
    disc.pass = disc.ratio_ok && disc.empirical_ok && disc.generic_ok;

    excl.generic_games.assign(kGenericGames, GenericGameCheck{});
    parallel_for(kGenericGames, [&](std::size_t g) {
        const GPTGameEnsemble random_game(
            excl_gin[g].prior,
            gpt_random_instrument_set(model, kappa, kGenericOutcomes, excl_gin[g].seed));
        GenericGameCheck check;
        check.resourceful_value = gpt_err_probability(random_game, omega, e).value;
        check.best_free_value = gpt_best_free_response(model, random_game, f, ff, kappa, l, false);
        check.ok = check.resourceful_value >= excl.target * check.best_free_value - 1e-6;
        excl.generic_games[g] = check;
    });
    excl.generic_ok = std::all_of(excl.generic_games.begin(), excl.generic_games.end(),
                                  [](const GenericGameCheck& c) { return c.ok; });
    excl.pass = excl.identity_ok && excl.empirical_ok && excl.ratio_ok && excl.generic_ok;
    const auto t_end = clock::now();

    VerificationReport out;
    out.n_samples = n_samples;
    out.seed = seed;
    out.pass = disc.pass && excl.pass;
    out.wall_ms_quantifiers = ms_between(t0, t_built);
    out.wall_ms_sampling = ms_between(t_built, t_sampled);
    out.wall_ms_generic = ms_between(t_sampled, t_end);
    out.wall_ms_total = ms_between(t0, t_end);
    out.discrimination = std::move(disc);
    out.exclusion = std::move(excl);
    return out;
}

// ---------------------------------------------------------------------------
// Random objects.

GPTState gpt_random_state(const GPTModel& model, std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<double> mix = rng.full_support_pmf(model.num_vertices());
    std::vector<double> v(model.dim(), 0.0);
    for (std::size_t i = 0; i < model.num_vertices(); ++i)
        add_scaled(v, mix[i], model.vertices()[i]);
    return GPTState(model, std::move(v));
}

GPTMeasurementSet gpt_random_measurement_set(const GPTModel& model, std::size_t settings,
                                             std::size_t outcomes, std::uint64_t seed) {
    if (settings == 0 || outcomes == 0)
        throw DimensionError("gpt_random_measurement_set: shape must be positive");
    const std::vector<std::vector<double>>& gens = model.dual_generators();
    Rng rng(seed);
    std::vector<std::vector<std::vector<double>>> effects(settings);
    for (std::size_t x = 0; x < settings; ++x) {
        // Dual-cone draws z_b, rescaled to fit under the unit, then completed
        // to a measurement with a random share of the leftover u - t * sum z.
        std::vector<std::vector<double>> zs(outcomes, std::vector<double>(model.dim(), 0.0));
        std::vector<double> total(model.dim(), 0.0);
        for (std::size_t b = 0; b < outcomes; ++b) {
            for (const std::vector<double>& g : gens)
                add_scaled(zs[b], 0.2 + rng.uniform01(), g);
            add_scaled(total, 1.0, zs[b]);
        }
        double peak = 0.0;
        for (const std::vector<double>& v : model.vertices())
            peak = std::max(peak, dot(total, v));
        const double theta = 0.35 + 0.3 * rng.uniform01();
        const double scale = theta / peak;
        const std::vector<double> share = rng.full_support_pmf(outcomes);
        std::vector<double> leftover = model.unit();
        add_scaled(leftover, -scale, total);
        effects[x].assign(outcomes, std::vector<double>());
        for (std::size_t b = 0; b < outcomes; ++b) {
            std::vector<double> eb = scaled(scale, zs[b]);
            add_scaled(eb, share[b], leftover);
            effects[x][b] = std::move(eb);
        }
    }
    return GPTMeasurementSet(model, std::move(effects));
}

GPTInstrumentSet gpt_random_instrument_set(const GPTModel& model, std::size_t settings,
                                           std::size_t outcomes, std::uint64_t seed) {
    if (settings == 0 || outcomes == 0)
        throw DimensionError("gpt_random_instrument_set: shape must be positive");
    Rng rng(seed);
    std::vector<std::vector<GPTSubchannel>> sub(settings);
    for (std::size_t y = 0; y < settings; ++y) {
        const GPTMeasurementSet mset = gpt_random_measurement_set(model, 1, outcomes, rng.raw());
        sub[y].reserve(outcomes);
        for (std::size_t b = 0; b < outcomes; ++b) {
            const GPTState prep = gpt_random_state(model, rng.raw());
            sub[y].push_back(
                GPTSubchannel::measure_prepare(model, mset.effect(b, 0), prep.vector()));
        }
    }
    return GPTInstrumentSet(model, std::move(sub));
}

// ---------------------------------------------------------------------------
// Qubit embedding.

namespace {

const std::vector<HermitianOperator>& pauli_basis() {
    static const std::vector<HermitianOperator> basis = [] {
        ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
        x(0, 1) = 1.0;
        x(1, 0) = 1.0;
        y(0, 1) = cplx(0.0, -1.0);
        y(1, 0) = cplx(0.0, 1.0);
        z(0, 0) = 1.0;
        z(1, 1) = -1.0;
        return std::vector<HermitianOperator>{
            HermitianOperator::identity(2), HermitianOperator::trusted(std::move(x)),
            HermitianOperator::trusted(std::move(y)), HermitianOperator::trusted(std::move(z))};
    }();
    return basis;
}

std::vector<double> pauli_coords(const HermitianOperator& op) {
    const std::vector<HermitianOperator>& basis = pauli_basis();
    std::vector<double> out(4);
    for (std::size_t k = 0; k < 4; ++k) out[k] = trace_inner(basis[k], op);
    return out;
}

void check_embedding_model(const GPTModel& model, const std::string& what) {
    if (model.dim() != 4)
        throw DimensionError(what + ": qubit embedding needs a four-dimensional model");
}

}  // namespace

GPTState qubit_to_gpt_state(const GPTModel& model, const State& rho) {
    check_embedding_model(model, "qubit_to_gpt_state");
    if (rho.dim() != 2) throw DimensionError("qubit_to_gpt_state: state must be a qubit");
    return GPTState(model, pauli_coords(rho.matrix()));
}

GPTEffect qubit_to_gpt_effect(const GPTModel& model, const HermitianOperator& e) {
    check_embedding_model(model, "qubit_to_gpt_effect");
    if (e.dim() != 2) throw DimensionError("qubit_to_gpt_effect: operator must be a qubit effect");
    return GPTEffect(model, scaled(0.5, pauli_coords(e)));
}

GPTMeasurementSet qubit_to_gpt_measurement_set(const GPTModel& model, const POVMSet& m) {
    check_embedding_model(model, "qubit_to_gpt_measurement_set");
    if (m.dim() != 2)
        throw DimensionError("qubit_to_gpt_measurement_set: POVM set must act on a qubit");
    std::vector<std::vector<std::vector<double>>> effects(m.settings());
    for (std::size_t x = 0; x < m.settings(); ++x) {
        effects[x].reserve(m.outcomes());
        for (std::size_t a = 0; a < m.outcomes(); ++a)
            effects[x].push_back(scaled(0.5, pauli_coords(m.effect(a, x))));
    }
    return GPTMeasurementSet(model, std::move(effects));
}

GPTSubchannel qubit_to_gpt_subchannel(const GPTModel& model, const Subchannel& sc) {
    check_embedding_model(model, "qubit_to_gpt_subchannel");
    if (sc.in_dim() != 2 || sc.out_dim() != 2)
        throw DimensionError("qubit_to_gpt_subchannel: map must take qubits to qubits");
    // Column k of the Bloch matrix is the image of the basis element
    // sigma_k / 2 expressed in Bloch coordinates.
    std::vector<double> m(16, 0.0);
    for (std::size_t k = 0; k < 4; ++k) {
        const HermitianOperator image =
            apply(sc, HermitianOperator::trusted(0.5 * pauli_basis()[k].matrix()));
        const std::vector<double> col = pauli_coords(image);
        for (std::size_t r = 0; r < 4; ++r) m[r * 4 + k] = col[r];
    }
    return GPTSubchannel::matrix(model, std::move(m));
}

GPTInstrumentSet qubit_to_gpt_instrument_set(const GPTModel& model, const InstrumentSet& inst) {
    check_embedding_model(model, "qubit_to_gpt_instrument_set");
    std::vector<std::vector<GPTSubchannel>> sub(inst.settings());
    for (std::size_t y = 0; y < inst.settings(); ++y) {
        sub[y].reserve(inst.outcomes());
        for (std::size_t b = 0; b < inst.outcomes(); ++b)
            sub[y].push_back(qubit_to_gpt_subchannel(model, inst.subchannel(b, y)));
    }
    return GPTInstrumentSet(model, std::move(sub));
}

GPTGameEnsemble qubit_to_gpt_game(const GPTModel& model, const GameEnsemble& game) {
    return GPTGameEnsemble(game.prior(), qubit_to_gpt_instrument_set(model, game.instruments()),
                           game.tail_multiplicity());
}

}  // namespace resgames
