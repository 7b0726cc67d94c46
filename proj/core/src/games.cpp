#include "resgames/games.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "resgames/errors.hpp"
#include "runtime.hpp"

namespace resgames {
namespace {

// An object whose quantifier value is at or below this counts as free when
// deciding whether a witness game exists at all.
constexpr double kFreeValueTol = 1e-7;
// Mixture trace below which the exclusion preparation falls back to the
// maximally mixed state.
constexpr double kXiDegenerateTol = 1e-12;
constexpr double kPmfTol = 1e-12;
// Random games drawn by the verifiers and the probe states used to spot-check
// the constructed bounds.
constexpr std::size_t kGenericGames = 20;
constexpr std::size_t kGenericOutcomes = 2;
constexpr std::size_t kProbeStates = 16;
constexpr std::uint64_t kProbeSeed = 0x9e3779b97f4a7c15ULL;
// Cap on the deterministic strategies enumerated by best_free_response.
constexpr std::size_t kStrategyCap = 1u << 16;

double trace_real(const HermitianOperator& h) { return trace(h.matrix()).real(); }

using detail::Rng;
using detail::parallel_for;

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

// tr[M_{a|x} phi_{b|y}(rho)] for every index combination, with the stored
// tail branch already scaled down to a single logical branch.
struct EvalTable {
    std::size_t tau = 0, stored = 0, kappa = 0, l = 0;
    std::vector<double> val;  // [((y*stored + b)*kappa + x)*l + a]

    double at(std::size_t y, std::size_t b, std::size_t x, std::size_t a) const {
        return val[((y * stored + b) * kappa + x) * l + a];
    }
};

EvalTable make_table(const GameEnsemble& game, const State& rho, const POVMSet& m) {
    const InstrumentSet& inst = game.instruments();
    if (rho.dim() != inst.in_dim())
        throw DimensionError("game evaluation: state dimension does not match the instrument input");
    EvalTable t;
    t.tau = inst.settings();
    t.stored = inst.outcomes();
    t.kappa = m.settings();
    t.l = m.outcomes();
    t.val.resize(t.tau * t.stored * t.kappa * t.l);
    const double tail_scale = 1.0 / static_cast<double>(game.tail_multiplicity());
    for (std::size_t y = 0; y < t.tau; ++y)
        for (std::size_t b = 0; b < t.stored; ++b) {
            const HermitianOperator out = apply(inst.subchannel(b, y), rho);
            if (out.dim() != m.dim())
                throw DimensionError(
                    "game evaluation: measurement dimension does not match the subchannel output");
            const double scale =
                (game.tail_multiplicity() > 1 && b + 1 == t.stored) ? tail_scale : 1.0;
            for (std::size_t x = 0; x < t.kappa; ++x)
                for (std::size_t a = 0; a < t.l; ++a)
                    t.val[((y * t.stored + b) * t.kappa + x) * t.l + a] =
                        scale * trace_inner(m.effect(a, x), out);
        }
    return t;
}

GameValue evaluate_game(const GameEnsemble& game, const State& rho, const POVMSet& m,
                        bool maximize) {
    const EvalTable t = make_table(game, rho, m);
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
            // Every term is a pairing of PSD operators, so a genuine negative
            // value is impossible; wipe the roundoff, refuse anything larger.
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
// t_y = tr[sum_b Z_{b|y}] / p(y) entering both game constructions.
std::vector<double> witness_setting_scales(
    const std::vector<std::vector<HermitianOperator>>& witness_set,
    const std::vector<double>& p_x) {
    std::vector<double> t(p_x.size(), 0.0);
    for (std::size_t x = 0; x < p_x.size(); ++x) {
        double tr = 0.0;
        for (const HermitianOperator& w : witness_set[x]) tr += trace_real(w);
        t[x] = tr / p_x[x];
    }
    return t;
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

std::vector<HermitianOperator> free_state_extremes(const FreeStateSet& f, std::size_t d,
                                                   const std::string& what) {
    std::vector<HermitianOperator> out;
    switch (f.variant) {
        case FreeStateSet::Variant::MaxMixedCone:
            out.push_back((1.0 / static_cast<double>(d)) * HermitianOperator::identity(d));
            break;
        case FreeStateSet::Variant::Incoherent:
            for (std::size_t i = 0; i < d; ++i) {
                std::vector<double> diag(d, 0.0);
                diag[i] = 1.0;
                out.push_back(HermitianOperator::diagonal(diag));
            }
            break;
        case FreeStateSet::Variant::CustomConic: {
            if (f.generators.empty())
                throw ValidationError(what + ": custom free state family has no generators");
            for (const HermitianOperator& g : f.generators) {
                const double tr = trace_real(g);
                if (!(tr > 0.0))
                    throw ValidationError(what + ": custom free state generator has no trace");
                if (g.dim() != d)
                    throw DimensionError(what + ": free state generator dimension mismatch");
                out.push_back((1.0 / tr) * g);
            }
            break;
        }
    }
    return out;
}

}  // namespace

GameValue succ_probability(const GameEnsemble& game, const State& rho, const POVMSet& m) {
    return evaluate_game(game, rho, m, true);
}

GameValue err_probability(const GameEnsemble& game, const State& rho, const POVMSet& m) {
    if (game.logical_outcomes() < 2)
        throw ValidationError("err_probability: exclusion needs at least two outcomes");
    return evaluate_game(game, rho, m, false);
}

std::pair<GameEnsemble, DiscGameCertificate> build_disc_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x, std::size_t j, const State& chi) {
    const std::size_t d = rho.dim();
    const std::size_t l = m.outcomes();
    if (m.dim() != d)
        throw DimensionError("build_disc_game: state and POVM set dimensions differ");
    if (chi.dim() != d)
        throw DimensionError("build_disc_game: chi dimension does not match the state");
    if (j == 0) throw ValidationError("build_disc_game: j must be positive");
    check_prior(p_x, m.settings(), "build_disc_game");

    QuantifierResult sr = robustness_state(rho, f);
    QuantifierResult mr = robustness_povmset(m, ff);
    if (sr.value <= kFreeValueTol && mr.value <= kFreeValueTol)
        throw FreeInputGameError(
            "build_disc_game: both objects are free, so no discrimination advantage exists");

    const double z_norm = operator_norm(sr.witness);
    const std::vector<double> t = witness_setting_scales(mr.witness_set, p_x);
    double tr_zm = 0.0;
    for (double v : t) tr_zm += v;
    if (!(z_norm > 0.0) || !(tr_zm > 0.0))
        throw SolverError("build_disc_game: witness normalization degenerated");
    const double alpha = 1.0 / (z_norm * tr_zm);
    if (alpha + 1.0 / static_cast<double>(j) > 1.0 + 1e-9)
        throw ValidationError("build_disc_game: j too small, alpha + 1/j exceeds 1");

    std::vector<std::vector<Subchannel>> sub;
    sub.reserve(m.settings());
    for (std::size_t y = 0; y < m.settings(); ++y) {
        std::vector<Subchannel> setting;
        setting.reserve(l + 1);
        const HermitianOperator effect = alpha * sr.witness;
        for (std::size_t b = 0; b < l; ++b)
            setting.push_back(
                Subchannel::measure_prepare(effect, (1.0 / p_x[y]) * mr.witness_set[y][b]));
        // Sum of the J identical garbage branches eta -> (1/J)(1 - F_y(eta)) chi.
        const HermitianOperator tail_effect =
            HermitianOperator::identity(d) - (alpha * t[y]) * sr.witness;
        setting.push_back(Subchannel::measure_prepare(tail_effect, chi.matrix()));
        sub.push_back(std::move(setting));
    }
    GameEnsemble game(p_x, InstrumentSet(std::move(sub)), j);

    for (std::size_t rep = 0; rep < kProbeStates; ++rep) {
        const State eta = random_state(d, kProbeSeed + rep);
        const double pairing = trace_inner(sr.witness, eta.matrix());
        for (std::size_t y = 0; y < m.settings(); ++y)
            if (alpha * t[y] * pairing > 1.0 + 1e-9)
                throw SolverError("build_disc_game: sampled F_y exceeded 1, witness scale is inconsistent");
    }

    DiscGameCertificate cert{alpha,    j,        chi,      sr.witness,
                             mr.witness_set, sr.value, mr.value, p_x};
    return {std::move(game), std::move(cert)};
}

std::pair<GameEnsemble, DiscGameCertificate> build_disc_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x, std::size_t j) {
    const State chi(
        (1.0 / static_cast<double>(rho.dim())) * HermitianOperator::identity(rho.dim()));
    return build_disc_game(rho, m, f, ff, p_x, j, chi);
}

std::pair<GameEnsemble, ExclGameCertificate> build_excl_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x, const std::vector<std::vector<double>>& pb_given_y) {
    const std::size_t d = rho.dim();
    const std::size_t l = m.outcomes();
    if (m.dim() != d)
        throw DimensionError("build_excl_game: state and POVM set dimensions differ");
    check_prior(p_x, m.settings(), "build_excl_game");
    if (pb_given_y.size() != m.settings())
        throw DimensionError("build_excl_game: conditional PMF has the wrong number of settings");
    for (const std::vector<double>& row : pb_given_y) {
        if (row.size() != l)
            throw DimensionError("build_excl_game: conditional PMF has the wrong number of outcomes");
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0)
                throw ValidationError("build_excl_game: conditional PMF entries must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kPmfTol)
            throw ValidationError("build_excl_game: conditional PMF rows must sum to 1");
    }

    QuantifierResult sr = weight_state(rho, f);
    QuantifierResult mr = weight_povmset(m, ff);
    if (sr.value <= kFreeValueTol && mr.value <= kFreeValueTol)
        throw FreeInputGameError(
            "build_excl_game: both objects are free, so no exclusion advantage exists");

    const double y_norm = operator_norm(sr.witness);
    const std::vector<double> u = witness_setting_scales(mr.witness_set, p_x);
    double tr_ym = 0.0;
    for (double v : u) tr_ym += v;
    if (!(y_norm > 0.0) || !(tr_ym > 0.0))
        throw SolverError("build_excl_game: witness normalization degenerated");
    const double beta = 1.0 / (2.0 * y_norm * tr_ym);

    std::vector<State> xi_states;
    std::vector<bool> xi_degenerate;
    xi_states.reserve(m.settings());
    xi_degenerate.reserve(m.settings());
    for (std::size_t y = 0; y < m.settings(); ++y) {
        HermitianOperator mix = HermitianOperator::zero(d);
        for (std::size_t b = 0; b < l; ++b) mix = mix + pb_given_y[y][b] * mr.witness_set[y][b];
        const double den = trace_real(mix);
        if (den < kXiDegenerateTol) {
            xi_states.emplace_back((1.0 / static_cast<double>(d)) *
                                   HermitianOperator::identity(d));
            xi_degenerate.push_back(true);
        } else {
            xi_states.emplace_back((1.0 / den) * mix);
            xi_degenerate.push_back(false);
        }
    }

    std::vector<std::vector<Subchannel>> sub;
    sub.reserve(m.settings());
    for (std::size_t y = 0; y < m.settings(); ++y) {
        std::vector<Subchannel> setting;
        setting.reserve(l + 1);
        const HermitianOperator effect = beta * sr.witness;
        for (std::size_t b = 0; b < l; ++b)
            setting.push_back(
                Subchannel::measure_prepare(effect, (1.0 / p_x[y]) * mr.witness_set[y][b]));
        // Final branch eta -> (1 - G_y(eta)) xi_y.
        const HermitianOperator tail_effect =
            HermitianOperator::identity(d) - (beta * u[y]) * sr.witness;
        setting.push_back(Subchannel::measure_prepare(tail_effect, xi_states[y].matrix()));
        sub.push_back(std::move(setting));
    }
    GameEnsemble game(p_x, InstrumentSet(std::move(sub)));

    for (std::size_t rep = 0; rep < kProbeStates; ++rep) {
        const State eta = random_state(d, kProbeSeed + rep);
        const double pairing = trace_inner(sr.witness, eta.matrix());
        for (std::size_t y = 0; y < m.settings(); ++y)
            if (beta * u[y] * pairing > 0.5 + 1e-9)
                throw SolverError("build_excl_game: sampled G_y exceeded 1/2, witness scale is inconsistent");
    }

    ExclGameCertificate cert{beta,     xi_states, xi_degenerate, pb_given_y, sr.witness,
                             mr.witness_set, sr.value,  mr.value,      p_x};
    return {std::move(game), std::move(cert)};
}

std::pair<GameEnsemble, ExclGameCertificate> build_excl_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x) {
    const std::vector<std::vector<double>> uniform(
        m.settings(), std::vector<double>(m.outcomes(), 1.0 / static_cast<double>(m.outcomes())));
    return build_excl_game(rho, m, f, ff, p_x, uniform);
}

std::vector<std::pair<State, POVMSet>> sample_free_pairs(const FreeStateSet& f,
                                                         const FreePOVMSetFamily& ff,
                                                         std::size_t d, std::size_t settings,
                                                         std::size_t outcomes, std::size_t n,
                                                         std::uint64_t seed) {
    if (d == 0 || settings == 0 || outcomes == 0)
        throw DimensionError("sample_free_pairs: dimensions must be positive");
    if (f.variant == FreeStateSet::Variant::CustomConic)
        throw ValidationError("sample_free_pairs: custom conic state families are not supported");
    if (ff.variant == FreePOVMSetFamily::Variant::CustomConic)
        throw ValidationError("sample_free_pairs: custom conic POVM families are not supported");
    const CompatibilityModel model(settings, outcomes);
    const std::size_t num_lambdas = model.num_lambdas();
    Rng rng(seed);
    std::vector<std::pair<State, POVMSet>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        State sigma = f.variant == FreeStateSet::Variant::MaxMixedCone
                          ? State((1.0 / static_cast<double>(d)) * HermitianOperator::identity(d))
                          : State(HermitianOperator::diagonal(rng.full_support_pmf(d)));
        // Random parent measurement followed by a random deterministic
        // post-processing: compatible by construction, checked regardless.
        const POVMSet parent = random_povm_set(d, 1, num_lambdas, rng.raw());
        std::vector<std::vector<HermitianOperator>> effects(
            settings, std::vector<HermitianOperator>(outcomes, HermitianOperator::zero(d)));
        for (std::size_t x = 0; x < settings; ++x)
            for (std::size_t lam = 0; lam < num_lambdas; ++lam) {
                const std::size_t a = rng.index_below(outcomes);
                effects[x][a] = effects[x][a] + parent.effect(lam, 0);
            }
        POVMSet nset(std::move(effects));
        if (!is_compatible(nset).compatible)
            throw SolverError("sample_free_pairs: constructed set failed the compatibility check");
        out.emplace_back(std::move(sigma), std::move(nset));
    }
    return out;
}

double best_free_response(const GameEnsemble& game, const FreeStateSet& f,
                          const FreePOVMSetFamily& ff, std::size_t settings,
                          std::size_t outcomes, bool maximize) {
    const InstrumentSet& inst = game.instruments();
    const std::size_t d = inst.in_dim();
    if (settings == 0 || outcomes == 0)
        throw DimensionError("best_free_response: measurement shape must be positive");
    const std::vector<HermitianOperator> sigmas =
        free_state_extremes(f, d, "best_free_response");
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    auto consider = [&](double v) {
        if (maximize ? v > best : v < best) best = v;
    };

    if (ff.variant == FreePOVMSetFamily::Variant::CustomConic) {
        if (ff.generators.empty())
            throw ValidationError("best_free_response: custom POVM family has no generators");
        for (const HermitianOperator& sigma : sigmas)
            for (const POVMSet& nset : ff.generators)
                consider(evaluate_game(game, State(sigma), nset, maximize).value);
        return best;
    }

    const CompatibilityModel model(settings, outcomes);
    const std::size_t num_lambdas = model.num_lambdas();
    const std::size_t tau = inst.settings();
    const std::size_t stored = inst.outcomes();
    const std::size_t count_x = ipow_capped(settings, tau, "best_free_response");
    const std::size_t count_g = ipow_capped(stored, outcomes * tau, "best_free_response");
    if (count_x > kStrategyCap / count_g)
        throw EnumerationCapError("best_free_response: deterministic strategy space exceeds the cap");
    const double tail_scale = 1.0 / static_cast<double>(game.tail_multiplicity());

    for (const HermitianOperator& sigma : sigmas) {
        // Weighted subchannel outputs, tail branch scaled to one logical copy.
        std::vector<std::vector<HermitianOperator>> outs(
            tau, std::vector<HermitianOperator>());
        for (std::size_t y = 0; y < tau; ++y) {
            outs[y].reserve(stored);
            for (std::size_t b = 0; b < stored; ++b) {
                HermitianOperator o = apply(inst.subchannel(b, y), sigma);
                if (game.tail_multiplicity() > 1 && b + 1 == stored) o = tail_scale * o;
                outs[y].push_back(game.prior()[y] * o);
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
                std::vector<HermitianOperator> w(num_lambdas, HermitianOperator::zero(d));
                for (std::size_t lam = 0; lam < num_lambdas; ++lam)
                    for (std::size_t y = 0; y < tau; ++y) {
                        const std::size_t a = model.response(lam, x_of_y[y]);
                        w[lam] = w[lam] + outs[y][g[y * outcomes + a]];
                    }
                consider(compatible_pairing_bound(w, maximize));
            }
        }
    }
    return best;
}

VerificationReport verify_discrimination_advantage(const State& rho, const POVMSet& m,
                                                   const FreeStateSet& f,
                                                   const FreePOVMSetFamily& ff, std::size_t j,
                                                   std::size_t n_samples, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto ms_between = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    if (n_samples == 0)
        throw ValidationError("verify_discrimination_advantage: need at least one sample");
    const auto t0 = clock::now();
    const std::size_t d = rho.dim();
    const std::size_t kappa = m.settings();
    const std::size_t l = m.outcomes();
    const std::vector<double> p_x(kappa, 1.0 / static_cast<double>(kappa));

    auto [game, cert] = build_disc_game(rho, m, f, ff, p_x, j);
    const auto t_built = clock::now();

    DiscriminationReport rep;
    rep.state_robustness = cert.state_robustness;
    rep.set_robustness = cert.set_robustness;
    rep.alpha = cert.alpha;
    rep.j = j;
    rep.numerator = succ_probability(game, rho, m).value;
    rep.analytic_denominator = cert.alpha + 1.0 / static_cast<double>(j);
    rep.ratio_lower = rep.numerator / rep.analytic_denominator;
    rep.target = (1.0 + rep.state_robustness) * (1.0 + rep.set_robustness);
    rep.identity_ok = rep.numerator >= cert.alpha * rep.target - 1e-7;
    rep.ratio_ok =
        rep.ratio_lower >= rep.target * (1.0 - 2.0 / static_cast<double>(j) - 1e-6);

    Rng rng(seed);
    const std::uint64_t sample_seed = rng.raw();
    struct GenericInput {
        std::vector<double> prior;
        std::uint64_t seed = 0;
    };
    std::vector<GenericInput> gin(kGenericGames);
    for (GenericInput& gi : gin) {
        gi.prior = rng.full_support_pmf(kappa);
        gi.seed = rng.raw();
    }

    const auto pairs = sample_free_pairs(f, ff, d, kappa, l, n_samples, sample_seed);
    rep.sample_values.assign(n_samples, 0.0);
    parallel_for(n_samples, [&](std::size_t i) {
        rep.sample_values[i] = succ_probability(game, pairs[i].first, pairs[i].second).value;
    });
    rep.empirical_denominator = *std::max_element(rep.sample_values.begin(),
                                                  rep.sample_values.end());
    rep.empirical_ok = rep.empirical_denominator <= rep.analytic_denominator + 1e-9;
    const auto t_sampled = clock::now();

    rep.generic_games.assign(kGenericGames, GenericGameCheck{});
    parallel_for(kGenericGames, [&](std::size_t g) {
        const GameEnsemble random_game(gin[g].prior,
                                       random_instrument_set(d, kappa, kGenericOutcomes,
                                                             gin[g].seed));
        GenericGameCheck check;
        check.resourceful_value = succ_probability(random_game, rho, m).value;
        check.best_free_value = best_free_response(random_game, f, ff, kappa, l, true);
        check.ok =
            check.resourceful_value <= rep.target * (1.0 + 1e-6) * check.best_free_value;
        rep.generic_games[g] = check;
    });
    rep.generic_ok = std::all_of(rep.generic_games.begin(), rep.generic_games.end(),
                                 [](const GenericGameCheck& c) { return c.ok; });
    rep.pass = rep.ratio_ok && rep.empirical_ok && rep.generic_ok;
    const auto t_end = clock::now();

    VerificationReport out;
    out.n_samples = n_samples;
    out.seed = seed;
    out.pass = rep.pass;
    out.wall_ms_quantifiers = ms_between(t0, t_built);
    out.wall_ms_sampling = ms_between(t_built, t_sampled);
    out.wall_ms_generic = ms_between(t_sampled, t_end);
    out.wall_ms_total = ms_between(t0, t_end);
    out.discrimination = std::move(rep);
    return out;
}

VerificationReport verify_exclusion_advantage(const State& rho, const POVMSet& m,
                                              const FreeStateSet& f, const FreePOVMSetFamily& ff,
                                              std::size_t n_samples, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto ms_between = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    if (n_samples == 0)
        throw ValidationError("verify_exclusion_advantage: need at least one sample");
    const auto t0 = clock::now();
    const std::size_t d = rho.dim();
    const std::size_t kappa = m.settings();
    const std::size_t l = m.outcomes();
    const std::vector<double> p_x(kappa, 1.0 / static_cast<double>(kappa));

    auto [game, cert] = build_excl_game(rho, m, f, ff, p_x);
    const auto t_built = clock::now();

    ExclusionReport rep;
    rep.state_weight = cert.state_weight;
    rep.set_weight = cert.set_weight;
    rep.beta = cert.beta;
    rep.numerator = err_probability(game, rho, m).value;
    rep.target = (1.0 - rep.state_weight) * (1.0 - rep.set_weight);
    rep.analytic_bound = cert.beta * rep.target;
    rep.ratio_upper = rep.numerator / cert.beta;
    rep.identity_ok = rep.numerator <= rep.analytic_bound + 1e-7;
    rep.ratio_ok = rep.ratio_upper <= rep.target + 1e-6;

    Rng rng(seed);
    const std::uint64_t sample_seed = rng.raw();
    struct GenericInput {
        std::vector<double> prior;
        std::uint64_t seed = 0;
    };
    std::vector<GenericInput> gin(kGenericGames);
    for (GenericInput& gi : gin) {
        gi.prior = rng.full_support_pmf(kappa);
        gi.seed = rng.raw();
    }

    const auto pairs = sample_free_pairs(f, ff, d, kappa, l, n_samples, sample_seed);
    rep.sample_values.assign(n_samples, 0.0);
    parallel_for(n_samples, [&](std::size_t i) {
        rep.sample_values[i] = err_probability(game, pairs[i].first, pairs[i].second).value;
    });
    rep.empirical_minimum = *std::min_element(rep.sample_values.begin(),
                                              rep.sample_values.end());
    rep.empirical_ok = rep.empirical_minimum >= cert.beta - 1e-9;
    const auto t_sampled = clock::now();

    rep.generic_games.assign(kGenericGames, GenericGameCheck{});
    parallel_for(kGenericGames, [&](std::size_t g) {
        const GameEnsemble random_game(gin[g].prior,
                                       random_instrument_set(d, kappa, kGenericOutcomes,
                                                             gin[g].seed));
        GenericGameCheck check;
        check.resourceful_value = err_probability(random_game, rho, m).value;
        check.best_free_value = best_free_response(random_game, f, ff, kappa, l, false);
        check.ok = check.resourceful_value >= rep.target * check.best_free_value - 1e-6;
        rep.generic_games[g] = check;
    });
    rep.generic_ok = std::all_of(rep.generic_games.begin(), rep.generic_games.end(),
                                 [](const GenericGameCheck& c) { return c.ok; });
    rep.pass = rep.identity_ok && rep.empirical_ok && rep.ratio_ok && rep.generic_ok;
    const auto t_end = clock::now();

    VerificationReport out;
    out.n_samples = n_samples;
    out.seed = seed;
    out.pass = rep.pass;
    out.wall_ms_quantifiers = ms_between(t0, t_built);
    out.wall_ms_sampling = ms_between(t_built, t_sampled);
    out.wall_ms_generic = ms_between(t_sampled, t_end);
    out.wall_ms_total = ms_between(t0, t_end);
    out.exclusion = std::move(rep);
    return out;
}

}  // namespace resgames
