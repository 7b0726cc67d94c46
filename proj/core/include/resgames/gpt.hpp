#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "resgames/games.hpp"
#include "resgames/objects.hpp"
#include "resgames/resources.hpp"

namespace resgames {

// ---------------------------------------------------------------------------
// Polytopic general-probabilistic models. A model is a finite list of state
// polytope vertices in an ambient real space V together with the unit
// functional u normalizing them (<u, v> = 1 for every vertex). States live in
// the cone V+ spanned by the vertices, effects in the dual cone V+°, and
// every membership question below reduces to finitely many inequalities
// against the vertices or the cached dual-cone generators.

class GPTModel {
public:
    // Validates and caches the model: vertices must be n-vectors with
    // <unit, v> = 1 within 1e-12 (so the affine hull of the polytope misses
    // the origin), their linear hull must span the ambient space, and at most
    // 64 vertices are accepted. Dual-cone generators are computed once here
    // by double description and shared by all later membership checks.
    GPTModel(std::size_t dim, std::vector<std::vector<double>> vertices,
             std::vector<double> unit);

    // Square bit: vertices (+-1, +-1, 1) with u = (0, 0, 1).
    static GPTModel gbit();
    // Single-axis qubit fragment: vertices (1, +-e_k) in Bloch coordinates
    // (1, x, y, z) with u = (1, 0, 0, 0). Diagonal qubit states and effects
    // embed exactly into this model.
    static GPTModel qubit_octahedron();

    std::size_t dim() const { return dim_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }
    const std::vector<double>& unit() const { return unit_; }
    // Extreme rays of the dual cone V+°, unit 2-norm, deterministic order.
    const std::vector<std::vector<double>>& dual_generators() const { return dual_; }
    // Average of the vertices; always a valid state.
    std::vector<double> barycenter() const;
    // Cone membership v in V+, decided against the dual generators.
    bool contains(const std::vector<double>& v, double tol = 1e-9) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<double>> vertices_;
    std::vector<double> unit_;
    std::vector<std::vector<double>> dual_;
};

// max over polytope vertices of |<z, v>|; by convexity this is the supremum
// of |<z, omega>| over all states of the model.
double order_unit_norm(const GPTModel& model, const std::vector<double>& z);

// A state omega: in V+ within 1e-9 and <u, omega> = 1 within 1e-12.
class GPTState {
public:
    GPTState(const GPTModel& model, std::vector<double> vec);
    std::size_t dim() const { return vec_.size(); }
    const std::vector<double>& vector() const { return vec_; }

private:
    std::vector<double> vec_;
};

// An effect e: 0 <= <e, v> <= 1 within 1e-9 on every vertex, which by
// convexity bounds the pairing on every state.
class GPTEffect {
public:
    GPTEffect(const GPTModel& model, std::vector<double> vec);
    std::size_t dim() const { return vec_.size(); }
    const std::vector<double>& vector() const { return vec_; }

private:
    std::vector<double> vec_;
};

// A measurement set E_{A|X}: effects e_{a|x} indexed [x][a], each valid, with
// sum_a e_{a|x} = u per setting within 1e-12 per coordinate.
class GPTMeasurementSet {
public:
    GPTMeasurementSet(const GPTModel& model,
                      std::vector<std::vector<std::vector<double>>> effects);
    std::size_t dim() const { return dim_; }
    std::size_t settings() const { return effects_.size(); }
    std::size_t outcomes() const { return effects_.front().size(); }
    const std::vector<double>& effect(std::size_t a, std::size_t x) const;
    const std::vector<std::vector<std::vector<double>>>& effects() const { return effects_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<std::vector<double>>> effects_;
};

// A subchannel is a linear map on V, stored as its n x n matrix. Validity is
// checked on the polytope vertices: L v stays in V+ within 1e-9 and
// <u, L v> <= 1 + 1e-9 (the trace-nonincreasing analogue). Complete
// positivity has no role here; vertex positivity is the whole requirement.
class GPTSubchannel {
public:
    // Row-major n x n matrix.
    static GPTSubchannel matrix(const GPTModel& model, std::vector<double> row_major);
    // Measure-and-prepare map eta -> <effect, eta> * preparation, stored as
    // the rank-one matrix preparation * effect^T.
    static GPTSubchannel measure_prepare(const GPTModel& model, const std::vector<double>& effect,
                                         const std::vector<double>& preparation);
    std::size_t dim() const { return dim_; }
    const std::vector<double>& row_major() const { return m_; }
    std::vector<double> apply(const std::vector<double>& v) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> m_;  // row-major
};

// Instrument set Xi_{B|Y}: a rectangular [y][b] array of subchannels over a
// common model; per setting the branches must sum to a channel, checked as
// <u, (sum_b L_b) v> = 1 within 1e-9 on every vertex.
class GPTInstrumentSet {
public:
    GPTInstrumentSet(const GPTModel& model, std::vector<std::vector<GPTSubchannel>> subchannels);
    std::size_t dim() const { return dim_; }
    std::size_t settings() const { return sub_.size(); }
    std::size_t outcomes() const { return sub_.front().size(); }
    const GPTSubchannel& subchannel(std::size_t b, std::size_t y) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<GPTSubchannel>> sub_;
};

// Ensemble of instrument settings with a full-support prior, plus the same
// implicit tail multiplicity as the quantum ensemble: the last stored branch
// per setting is the sum of tail_multiplicity identical logical branches.
class GPTGameEnsemble {
public:
    GPTGameEnsemble(std::vector<double> prior, GPTInstrumentSet instruments,
                    std::size_t tail_multiplicity = 1);
    const std::vector<double>& prior() const { return prior_; }
    const GPTInstrumentSet& instruments() const { return instruments_; }
    std::size_t tail_multiplicity() const { return tail_; }
    std::size_t logical_outcomes() const { return instruments_.outcomes() - 1 + tail_; }

private:
    std::vector<double> prior_;
    GPTInstrumentSet instruments_;
    std::size_t tail_ = 1;
};

// Game values under the Euclidean pairing <e_{a|x}, xi_{b|y}(omega)>, with
// the same deterministic strategy reduction and GameValue payload as the
// quantum evaluators.
GameValue gpt_succ_probability(const GPTGameEnsemble& game, const GPTState& omega,
                               const GPTMeasurementSet& e);
GameValue gpt_err_probability(const GPTGameEnsemble& game, const GPTState& omega,
                              const GPTMeasurementSet& e);

// Free families. Free states form a sub-polytope of the state space, given
// by a generator list (each generator, scaled to unit pairing with u, must be
// a valid state of the model). Free measurement sets are the compatible
// sets: deterministic coarse-grainings of one parent measurement.
struct GPTFreeStateSet {
    std::vector<std::vector<double>> generators;

    static GPTFreeStateSet polytope(std::vector<std::vector<double>> generators);
};

struct GPTFreeMeasurementFamily {
    enum class Variant { Compatible };
    Variant variant = Variant::Compatible;

    static GPTFreeMeasurementFamily compatible();
};

// Result of a linear-programming quantifier solve. Both directions of the
// underlying program are solved independently: primal_value comes from the
// decomposition form, dual_value from the witness form, and value reports
// the witness optimum. Witnesses are normalized so the extremal free pairing
// is exactly 1 (maximum for robustness, minimum for weight).
struct GPTQuantifierResult {
    QuantifierKind kind = QuantifierKind::RobustnessState;
    double value = 0.0;
    std::vector<double> witness;                                 // state quantifiers
    std::vector<std::vector<std::vector<double>>> witness_set;   // [x][a], set quantifiers
    double primal_value = 0.0;
    double dual_value = 0.0;
    QuantifierDiagnostics diagnostics;
};

// Generalised robustness of a state against a free sub-polytope: least r
// such that (omega + r * delta)/(1 + r) is free for some state delta. The
// witness z satisfies z in V+°, <z, sigma> <= 1 on free states, and
// <z, omega> = 1 + value.
GPTQuantifierResult gpt_robustness_state(const GPTModel& model, const GPTState& omega,
                                         const GPTFreeStateSet& f);

// Weight of a state: least w such that omega = w * gamma + (1 - w) * sigma
// with sigma free. The witness y satisfies y in V+°, <y, sigma> >= 1 on free
// states, and <y, omega> = 1 - value.
GPTQuantifierResult gpt_weight_state(const GPTModel& model, const GPTState& omega,
                                     const GPTFreeStateSet& f);

// Generalised robustness of a measurement set against the compatible sets.
// The witness vectors z_{a,x} lie in V+ and pair with any compatible set to
// at most 1; sum_{a,x} <e_{a|x}, z_{a,x}> = 1 + value.
GPTQuantifierResult gpt_robustness_mset(const GPTModel& model, const GPTMeasurementSet& e,
                                        const GPTFreeMeasurementFamily& ff);

// Weight of a measurement set against the compatible sets. The witness
// vectors y_{a,x} lie in V+ and pair with any compatible set to at least 1;
// sum_{a,x} <e_{a|x}, y_{a,x}> = 1 - value.
GPTQuantifierResult gpt_weight_mset(const GPTModel& model, const GPTMeasurementSet& e,
                                    const GPTFreeMeasurementFamily& ff);

// Extremum of sum_lambda <g_lambda, weights[lambda]> over parent measurements
// {g_lambda} (effects summing to u), the linear program behind the
// compatible-set pairing bounds. weights[lambda] are n-vectors.
double gpt_compatible_pairing_bound(const GPTModel& model,
                                    const std::vector<std::vector<double>>& weights,
                                    bool maximize);

// Certificate of a constructed discrimination game.
struct GPTDiscGameCertificate {
    double alpha = 0.0;
    std::size_t j = 0;
    GPTState chi;
    std::vector<double> state_witness;
    std::vector<std::vector<std::vector<double>>> set_witnesses;  // [x][b]
    double state_robustness = 0.0;
    double set_robustness = 0.0;
    std::vector<double> p_x;
};

// Certificate of a constructed exclusion game.
struct GPTExclGameCertificate {
    double beta = 0.0;
    std::vector<GPTState> xi_states;
    std::vector<bool> xi_degenerate;
    std::vector<std::vector<double>> pb_given_y;
    std::vector<double> state_witness;
    std::vector<std::vector<std::vector<double>>> set_witnesses;  // [x][b]
    double state_weight = 0.0;
    double set_weight = 0.0;
    std::vector<double> p_x;
};

// Discrimination game from the robustness witnesses of (omega, E): branch b
// of setting y maps eta -> alpha <z, eta> z_{b|y} / p(y) with
// alpha = 1 / (order_unit_norm(z) * <u, z_E>), and j garbage branches share
// the leftover weight and prepare chi. Throws FreeInputGameError when both
// objects are free.
std::pair<GPTGameEnsemble, GPTDiscGameCertificate> build_gpt_disc_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff, const std::vector<double>& p_x,
    std::size_t j, const GPTState& chi);

// Same with chi defaulting to the polytope barycenter.
std::pair<GPTGameEnsemble, GPTDiscGameCertificate> build_gpt_disc_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff, const std::vector<double>& p_x,
    std::size_t j);

// Exclusion game from the weight witnesses of (omega, E), the order-unit
// transliteration of the quantum construction: beta = 1 / (2 |y|_u <u, y_E>),
// branch b of setting y maps eta -> beta <y, eta> y_{b|y} / p(y), and the
// final branch prepares the witness mixture xi_y with the leftover weight.
std::pair<GPTGameEnsemble, GPTExclGameCertificate> build_gpt_excl_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff, const std::vector<double>& p_x,
    const std::vector<std::vector<double>>& pb_given_y);

// Same with uniform pb_given_y.
std::pair<GPTGameEnsemble, GPTExclGameCertificate> build_gpt_excl_game(
    const GPTModel& model, const GPTState& omega, const GPTMeasurementSet& e,
    const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff,
    const std::vector<double>& p_x);

// Draw n pairs (free state, compatible measurement set), deterministically in
// the seed: random convex mixtures of the free generators, and deterministic
// coarse-grainings of random parent measurements.
std::vector<std::pair<GPTState, GPTMeasurementSet>> gpt_sample_free_pairs(
    const GPTModel& model, const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff,
    std::size_t settings, std::size_t outcomes, std::size_t n, std::uint64_t seed);

// Exact optimum of a game over free pairs: free-polytope generators crossed
// with deterministic strategies, the per-strategy optimum over compatible
// sets solved as a parent linear program.
double gpt_best_free_response(const GPTModel& model, const GPTGameEnsemble& game,
                              const GPTFreeStateSet& f, const GPTFreeMeasurementFamily& ff,
                              std::size_t settings, std::size_t outcomes, bool maximize);

// End-to-end check of the multiplicative advantage in the polytopic model:
// builds both witness games (uniform priors, barycenter chi, uniform
// pb_given_y), fills both report branches with the same flag semantics as
// the quantum verifiers, and passes only when both branches pass.
// Deterministic in the seed.
VerificationReport verify_gpt_advantage(const GPTModel& model, const GPTState& omega,
                                        const GPTMeasurementSet& e, const GPTFreeStateSet& f,
                                        const GPTFreeMeasurementFamily& ff, std::size_t j,
                                        std::size_t n_samples, std::uint64_t seed);

// Deterministic random objects: a full-support vertex mixture, a measurement
// set built from dual-cone draws completed to the unit, and an instrument
// set of measure-and-prepare branches.
GPTState gpt_random_state(const GPTModel& model, std::uint64_t seed);
GPTMeasurementSet gpt_random_measurement_set(const GPTModel& model, std::size_t settings,
                                             std::size_t outcomes, std::uint64_t seed);
GPTInstrumentSet gpt_random_instrument_set(const GPTModel& model, std::size_t settings,
                                           std::size_t outcomes, std::uint64_t seed);

// Bloch-coordinate embedding of qubit objects into a four-dimensional model:
// a state rho maps to (tr rho, tr rho sigma_x, tr rho sigma_y, tr rho sigma_z)
// and an operator E to half its Pauli coefficients, so Euclidean pairings
// reproduce trace pairings exactly. The target model decides validity; the
// octahedron model accepts exactly the diagonal fragment.
GPTState qubit_to_gpt_state(const GPTModel& model, const State& rho);
GPTEffect qubit_to_gpt_effect(const GPTModel& model, const HermitianOperator& e);
GPTMeasurementSet qubit_to_gpt_measurement_set(const GPTModel& model, const POVMSet& m);
GPTSubchannel qubit_to_gpt_subchannel(const GPTModel& model, const Subchannel& sc);
GPTInstrumentSet qubit_to_gpt_instrument_set(const GPTModel& model, const InstrumentSet& inst);
GPTGameEnsemble qubit_to_gpt_game(const GPTModel& model, const GameEnsemble& game);

}  // namespace resgames
