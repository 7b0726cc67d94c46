#include "resgames/objects.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace resgames {
namespace {

constexpr double kPsdTol = 1e-9;
constexpr double kPmfTol = 1e-12;
const double kTwoPi = 8.0 * std::atan(1.0);

ComplexMatrix conj_matrix(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = std::conj(m(i, j));
    return out;
}

// Spanning set of Hermitian inputs used to validate trace preservation:
// diagonal projectors plus real and imaginary off-diagonal combinations.
std::vector<HermitianOperator> hermitian_basis(std::size_t d) {
    std::vector<HermitianOperator> basis;
    basis.reserve(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        ComplexMatrix m(d, d);
        m(i, i) = 1.0;
        basis.push_back(HermitianOperator::trusted(std::move(m)));
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            ComplexMatrix re(d, d);
            re(i, j) = 1.0;
            re(j, i) = 1.0;
            basis.push_back(HermitianOperator::trusted(std::move(re)));
            ComplexMatrix im(d, d);
            im(i, j) = cplx(0.0, -1.0);
            im(j, i) = cplx(0.0, 1.0);
            basis.push_back(HermitianOperator::trusted(std::move(im)));
        }
    return basis;
}

// Deterministic Gaussian sampling from raw mt19937_64 draws.
struct Rng {
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform01() {  // in (0, 1], keeps the Box-Muller log finite
        return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
    }
    double gauss() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }
    ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        ComplexMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(gauss(), gauss());
        return m;
    }
    HermitianOperator random_psd(std::size_t d) {
        const ComplexMatrix g = gaussian_matrix(d, d);
        return HermitianOperator::trusted(g * adjoint(g));
    }
    HermitianOperator random_density(std::size_t d) {
        const HermitianOperator p = random_psd(d);
        return (1.0 / trace(p.matrix()).real()) * p;
    }
    std::vector<HermitianOperator> random_povm(std::size_t d, std::size_t outcomes) {
        std::vector<HermitianOperator> blocks;
        blocks.reserve(outcomes);
        HermitianOperator sum = HermitianOperator::zero(d);
        for (std::size_t a = 0; a < outcomes; ++a) {
            blocks.push_back(random_psd(d));
            sum = sum + blocks.back();
        }
        const HermitianOperator t = herm_inv_sqrt(sum);
        std::vector<HermitianOperator> effects;
        effects.reserve(outcomes);
        for (const HermitianOperator& p : blocks)
            effects.push_back(
                HermitianOperator::trusted(t.matrix() * p.matrix() * t.matrix()));
        return effects;
    }

    std::mt19937_64 eng;
};

void check_pmf(const std::vector<double>& p, std::size_t offset, std::size_t count,
               const char* what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = p[offset + i];
        if (!(v >= -kPmfTol))
            throw ValidationError(std::string(what) + ": negative probability entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kPmfTol)
        throw ValidationError(std::string(what) + ": probabilities do not sum to 1");
}

}  // namespace

// ---------------------------------------------------------------------------
// State

State::State(HermitianOperator rho) : rho_(std::move(rho)) {
    if (!is_psd(rho_, kPsdTol)) throw ValidationError("state: matrix is not PSD");
    if (std::abs(trace(rho_.matrix()).real() - 1.0) > kPsdTol)
        throw ValidationError("state: trace is not 1");
}

// ---------------------------------------------------------------------------
// POVMSet

POVMSet::POVMSet(std::vector<std::vector<HermitianOperator>> effects_by_setting)
    : effects_(std::move(effects_by_setting)) {
    if (effects_.empty()) throw DimensionError("povm set: no settings");
    const std::size_t l = effects_.front().size();
    if (l == 0) throw DimensionError("povm set: no outcomes");
    dim_ = effects_.front().front().dim();
    for (const auto& setting : effects_) {
        if (setting.size() != l)
            throw DimensionError("povm set: settings have different outcome counts");
        HermitianOperator sum = HermitianOperator::zero(dim_);
        for (const HermitianOperator& eff : setting) {
            if (eff.dim() != dim_) throw DimensionError("povm set: mixed effect dimensions");
            if (!is_psd(eff, kPsdTol)) throw ValidationError("povm set: effect is not PSD");
            sum = sum + eff;
        }
        if (max_abs_entry(sum.matrix() - ComplexMatrix::identity(dim_)) > kPsdTol)
            throw ValidationError("povm set: effects do not sum to the identity");
    }
}

const HermitianOperator& POVMSet::effect(std::size_t a, std::size_t x) const {
    if (x >= settings() || a >= outcomes())
        throw DimensionError("povm set: effect index out of range");
    return effects_[x][a];
}

// ---------------------------------------------------------------------------
// Subchannel

Subchannel Subchannel::measure_prepare(HermitianOperator effect, HermitianOperator preparation) {
    if (!is_psd(effect, kPsdTol))
        throw ValidationError("subchannel: measure-prepare effect is not PSD");
    if (!is_psd(preparation, kPsdTol))
        throw ValidationError("subchannel: measure-prepare preparation is not PSD");
    if (operator_norm(effect) * trace(preparation.matrix()).real() > 1.0 + kPsdTol)
        throw ValidationError("subchannel: measure-prepare map increases trace");
    Subchannel sc;
    sc.kind_ = Kind::MeasurePrepare;
    sc.in_dim_ = effect.dim();
    sc.out_dim_ = preparation.dim();
    sc.e_ = std::move(effect);
    sc.k_ = std::move(preparation);
    return sc;
}

Subchannel Subchannel::choi(HermitianOperator c, std::size_t in_dim, std::size_t out_dim) {
    if (in_dim == 0 || out_dim == 0 || c.dim() != in_dim * out_dim)
        throw DimensionError("subchannel: Choi matrix dimension does not factor as in*out");
    if (!is_psd(c, kPsdTol)) throw ValidationError("subchannel: Choi matrix is not PSD");
    const HermitianOperator reduced = partial_trace(c, in_dim, out_dim, Subsystem::Second);
    const HermitianOperator gap = HermitianOperator::identity(in_dim) - reduced;
    if (!is_psd(gap, kPsdTol)) throw ValidationError("subchannel: Choi map increases trace");
    Subchannel sc;
    sc.kind_ = Kind::Choi;
    sc.in_dim_ = in_dim;
    sc.out_dim_ = out_dim;
    sc.c_ = std::move(c);
    return sc;
}

const HermitianOperator& Subchannel::effect() const {
    if (kind_ != Kind::MeasurePrepare)
        throw ValidationError("subchannel: not a measure-prepare subchannel");
    return e_;
}

const HermitianOperator& Subchannel::preparation() const {
    if (kind_ != Kind::MeasurePrepare)
        throw ValidationError("subchannel: not a measure-prepare subchannel");
    return k_;
}

const HermitianOperator& Subchannel::choi_matrix() const {
    if (kind_ != Kind::Choi) throw ValidationError("subchannel: not a Choi subchannel");
    return c_;
}

Subchannel Subchannel::to_choi() const {
    if (kind_ == Kind::Choi) return *this;
    // C = sum_ij |i><j| (x) tr[E |i><j|] K = E^T (x) K, and E^T = conj(E).
    return choi(HermitianOperator::trusted(kron(conj_matrix(e_.matrix()), k_.matrix())),
                in_dim_, out_dim_);
}

HermitianOperator apply(const Subchannel& sc, const HermitianOperator& input) {
    if (input.dim() != sc.in_dim()) throw DimensionError("apply: input dimension mismatch");
    if (sc.kind() == Subchannel::Kind::MeasurePrepare)
        return trace_inner(sc.effect(), input) * sc.preparation();
    // phi(rho)_{b,b'} = sum_{i,j} rho_{ij} C(i*out+b, j*out+b').
    const std::size_t din = sc.in_dim(), dout = sc.out_dim();
    const ComplexMatrix& c = sc.choi_matrix().matrix();
    const ComplexMatrix& rho = input.matrix();
    ComplexMatrix out(dout, dout);
    for (std::size_t i = 0; i < din; ++i)
        for (std::size_t j = 0; j < din; ++j) {
            const cplx w = rho(i, j);
            if (w == cplx(0.0, 0.0)) continue;
            for (std::size_t b = 0; b < dout; ++b)
                for (std::size_t bp = 0; bp < dout; ++bp)
                    out(b, bp) += w * c(i * dout + b, j * dout + bp);
        }
    return HermitianOperator::trusted(std::move(out));
}

HermitianOperator apply(const Subchannel& sc, const State& rho) {
    return apply(sc, rho.matrix());
}

// ---------------------------------------------------------------------------
// InstrumentSet / GameEnsemble

InstrumentSet::InstrumentSet(std::vector<std::vector<Subchannel>> subchannels_by_setting)
    : sub_(std::move(subchannels_by_setting)) {
    if (sub_.empty()) throw DimensionError("instrument set: no settings");
    const std::size_t m = sub_.front().size();
    if (m == 0) throw DimensionError("instrument set: no outcomes");
    const std::size_t d = sub_.front().front().in_dim();
    for (const auto& setting : sub_) {
        if (setting.size() != m)
            throw DimensionError("instrument set: settings have different outcome counts");
        for (const Subchannel& sc : setting)
            if (sc.in_dim() != d)
                throw DimensionError("instrument set: mixed input dimensions");
    }
    const std::vector<HermitianOperator> basis = hermitian_basis(d);
    for (const auto& setting : sub_)
        for (const HermitianOperator& input : basis) {
            double total = 0.0;
            for (const Subchannel& sc : setting)
                total += trace(apply(sc, input).matrix()).real();
            if (std::abs(total - trace(input.matrix()).real()) > kPsdTol)
                throw ValidationError("instrument set: instrument is not trace-preserving");
        }
}

const Subchannel& InstrumentSet::subchannel(std::size_t b, std::size_t y) const {
    if (y >= settings() || b >= outcomes())
        throw DimensionError("instrument set: subchannel index out of range");
    return sub_[y][b];
}

GameEnsemble::GameEnsemble(std::vector<double> prior, InstrumentSet instruments,
                           std::size_t tail_multiplicity)
    : prior_(std::move(prior)),
      instruments_(std::move(instruments)),
      tail_multiplicity_(tail_multiplicity) {
    if (prior_.size() != instruments_.settings())
        throw DimensionError("game ensemble: prior length does not match settings");
    if (tail_multiplicity_ == 0)
        throw ValidationError("game ensemble: tail multiplicity must be at least 1");
    double sum = 0.0;
    for (double p : prior_) {
        if (!(p > 0.0)) throw ValidationError("game ensemble: prior entries must be positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kPmfTol)
        throw ValidationError("game ensemble: prior does not sum to 1");
}

// ---------------------------------------------------------------------------
// Strategies

Strategy::Strategy(std::size_t num_z, std::size_t num_x, std::size_t num_y, std::size_t num_a,
                   std::size_t num_out, std::vector<double> q, std::vector<double> r,
                   std::vector<double> s)
    : num_z_(num_z),
      num_x_(num_x),
      num_y_(num_y),
      num_a_(num_a),
      num_out_(num_out),
      q_(std::move(q)),
      r_(std::move(r)),
      s_(std::move(s)) {
    if (num_z_ == 0 || num_x_ == 0 || num_y_ == 0 || num_a_ == 0 || num_out_ == 0)
        throw DimensionError("strategy: empty index range");
    if (q_.size() != num_z_ || r_.size() != num_y_ * num_z_ * num_x_ ||
        s_.size() != num_y_ * num_z_ * num_a_ * num_out_)
        throw DimensionError("strategy: distribution size mismatch");
    check_pmf(q_, 0, num_z_, "strategy q");
    for (std::size_t y = 0; y < num_y_; ++y)
        for (std::size_t z = 0; z < num_z_; ++z)
            check_pmf(r_, (y * num_z_ + z) * num_x_, num_x_, "strategy r");
    for (std::size_t y = 0; y < num_y_; ++y)
        for (std::size_t z = 0; z < num_z_; ++z)
            for (std::size_t a = 0; a < num_a_; ++a)
                check_pmf(s_, ((y * num_z_ + z) * num_a_ + a) * num_out_, num_out_,
                          "strategy s");
}

Strategy to_strategy(const DeterministicStrategy& det, std::size_t num_x, std::size_t num_a,
                     std::size_t num_out) {
    const std::size_t num_y = det.x_of_y.size();
    if (num_y == 0 || det.g_of_ay.size() != num_y)
        throw DimensionError("deterministic strategy: map sizes do not match");
    std::vector<double> r(num_y * num_x, 0.0);
    std::vector<double> s(num_y * num_a * num_out, 0.0);
    for (std::size_t y = 0; y < num_y; ++y) {
        if (det.x_of_y[y] >= num_x)
            throw DimensionError("deterministic strategy: input choice out of range");
        if (det.g_of_ay[y].size() != num_a)
            throw DimensionError("deterministic strategy: relabeling size mismatch");
        r[y * num_x + det.x_of_y[y]] = 1.0;
        for (std::size_t a = 0; a < num_a; ++a) {
            if (det.g_of_ay[y][a] >= num_out)
                throw DimensionError("deterministic strategy: relabeling out of range");
            s[(y * num_a + a) * num_out + det.g_of_ay[y][a]] = 1.0;
        }
    }
    return Strategy(1, num_x, num_y, num_a, num_out, {1.0}, std::move(r), std::move(s));
}

POVMSet simulate(const POVMSet& m, const Strategy& strat, std::size_t out_settings,
                 std::size_t out_outcomes) {
    if (strat.num_x() != m.settings() || strat.num_a() != m.outcomes())
        throw DimensionError("simulate: strategy index ranges do not match the POVM set");
    if (strat.num_y() != out_settings || strat.num_out() != out_outcomes)
        throw DimensionError("simulate: strategy output ranges do not match the request");
    const std::size_t d = m.dim();
    std::vector<std::vector<HermitianOperator>> effects(
        out_settings, std::vector<HermitianOperator>());
    for (std::size_t y = 0; y < out_settings; ++y) {
        for (std::size_t b = 0; b < out_outcomes; ++b) {
            ComplexMatrix acc(d, d);
            for (std::size_t z = 0; z < strat.num_z(); ++z) {
                const double qz = strat.q(z);
                if (qz == 0.0) continue;
                for (std::size_t x = 0; x < m.settings(); ++x) {
                    const double rx = strat.r(x, y, z);
                    if (rx == 0.0) continue;
                    for (std::size_t a = 0; a < m.outcomes(); ++a) {
                        const double w = qz * rx * strat.s(b, a, y, z);
                        if (w == 0.0) continue;
                        acc = acc + w * m.effect(a, x).matrix();
                    }
                }
            }
            effects[y].push_back(HermitianOperator::trusted(std::move(acc)));
        }
    }
    return POVMSet(std::move(effects));
}

POVMSet merge_tail_outcomes(const POVMSet& n, std::size_t keep) {
    if (keep == 0 || keep > n.outcomes())
        throw DimensionError("merge_tail_outcomes: kept outcome count out of range");
    std::vector<std::vector<HermitianOperator>> effects;
    effects.reserve(n.settings());
    for (std::size_t x = 0; x < n.settings(); ++x) {
        std::vector<HermitianOperator> setting;
        setting.reserve(keep);
        for (std::size_t a = 0; a + 1 < keep; ++a) setting.push_back(n.effect(a, x));
        HermitianOperator tail = n.effect(keep - 1, x);
        for (std::size_t a = keep; a < n.outcomes(); ++a) tail = tail + n.effect(a, x);
        setting.push_back(std::move(tail));
        effects.push_back(std::move(setting));
    }
    return POVMSet(std::move(effects));
}

POVMSet noisy_mub_pair(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ValidationError("noisy_mub_pair: visibility outside [0, 1]");
    const double hi = (1.0 + eta) / 2.0, lo = (1.0 - eta) / 2.0;
    ComplexMatrix zp(2, 2), zm(2, 2), xp(2, 2), xm(2, 2);
    zp(0, 0) = hi;
    zp(1, 1) = lo;
    zm(0, 0) = lo;
    zm(1, 1) = hi;
    xp(0, 0) = 0.5;
    xp(1, 1) = 0.5;
    xp(0, 1) = eta / 2.0;
    xp(1, 0) = eta / 2.0;
    xm(0, 0) = 0.5;
    xm(1, 1) = 0.5;
    xm(0, 1) = -eta / 2.0;
    xm(1, 0) = -eta / 2.0;
    return POVMSet({{HermitianOperator::trusted(std::move(zp)),
                     HermitianOperator::trusted(std::move(zm))},
                    {HermitianOperator::trusted(std::move(xp)),
                     HermitianOperator::trusted(std::move(xm))}});
}

// ---------------------------------------------------------------------------
// Random objects

State random_state(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw DimensionError("random_state: dimension must be positive");
    Rng rng(seed);
    return State(rng.random_density(d));
}

POVMSet random_povm_set(std::size_t d, std::size_t settings, std::size_t outcomes,
                        std::uint64_t seed) {
    if (d == 0 || settings == 0 || outcomes == 0)
        throw DimensionError("random_povm_set: dimensions must be positive");
    Rng rng(seed);
    std::vector<std::vector<HermitianOperator>> effects;
    effects.reserve(settings);
    for (std::size_t x = 0; x < settings; ++x) effects.push_back(rng.random_povm(d, outcomes));
    return POVMSet(std::move(effects));
}

InstrumentSet random_instrument_set(std::size_t d, std::size_t settings, std::size_t outcomes,
                                    std::uint64_t seed) {
    if (d == 0 || settings == 0 || outcomes == 0)
        throw DimensionError("random_instrument_set: dimensions must be positive");
    Rng rng(seed);
    std::vector<std::vector<Subchannel>> sub;
    sub.reserve(settings);
    for (std::size_t y = 0; y < settings; ++y) {
        const std::vector<HermitianOperator> povm = rng.random_povm(d, outcomes);
        std::vector<Subchannel> setting;
        setting.reserve(outcomes);
        for (std::size_t b = 0; b < outcomes; ++b)
            setting.push_back(Subchannel::measure_prepare(povm[b], rng.random_density(d)));
        sub.push_back(std::move(setting));
    }
    return InstrumentSet(std::move(sub));
}

}  // namespace resgames
