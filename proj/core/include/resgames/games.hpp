#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "resgames/objects.hpp"
#include "resgames/resources.hpp"

namespace resgames {

// Value of a discrimination or exclusion game together with an optimal
// classical strategy. `value` equals sum_y prior[y] * per_setting_values[y]
// exactly (the sum is how it is computed). Outcome indices inside
// `optimal_strategy.g_of_ay` refer to the game's STORED outcomes: when the
// game has tail_multiplicity J > 1, index outcomes()-1 stands for "any of the
// J identical tail branches" (they share one value, so the choice is
// irrelevant to the game value).
struct GameValue {
    double value = 0.0;
    DeterministicStrategy optimal_strategy;
    std::vector<double> per_setting_values;
};

// Certificate accompanying a witness-built discrimination game.
// `set_witnesses` follows the resources convention: indexed [x][a] (the game
// setting y coincides with the measurement setting x). The scale satisfies
// alpha = 1 / (operator_norm(state_witness) * tr[set_witness_sum]) with
// set_witness_sum = sum_{a,x} Z_{a,x} / p_x[x], and alpha + 1/J <= 1 + 1e-9.
struct DiscGameCertificate {
    double alpha = 0.0;
    std::size_t j = 0;
    State chi;
    HermitianOperator state_witness;
    std::vector<std::vector<HermitianOperator>> set_witnesses;  // [x][a]
    double state_robustness = 0.0;
    double set_robustness = 0.0;
    std::vector<double> p_x;
};

// Certificate accompanying a witness-built exclusion game. xi_states[y] is
// the prepared state of the last outcome; xi_degenerate[y] marks settings
// where the defining mixture had (numerically) zero trace and the maximally
// mixed state was substituted. beta = 1 / (2 * operator_norm(state_witness) *
// tr[set_witness_sum]).
struct ExclGameCertificate {
    double beta = 0.0;
    std::vector<State> xi_states;                // [y]
    std::vector<bool> xi_degenerate;             // [y]
    std::vector<std::vector<double>> pb_given_y; // [y][b]
    HermitianOperator state_witness;
    std::vector<std::vector<HermitianOperator>> set_witnesses;  // [x][a]
    double state_weight = 0.0;
    double set_weight = 0.0;
    std::vector<double> p_x;
};

// Maximum success probability of guessing the instrument outcome:
//   sum_y p(y) max_x sum_a max_b tr[M_{a|x} phi_{b|y}(rho)].
// Argmax ties are broken toward the lowest index so the reported strategy is
// reproducible. Requires rho.dim() == instrument input dimension and
// M.dim() == every subchannel's output dimension.
GameValue succ_probability(const GameEnsemble& game, const State& rho, const POVMSet& m);

// Minimum probability of pointing at the realized outcome (exclusion):
//   sum_y p(y) min_x sum_a min_b tr[M_{a|x} phi_{b|y}(rho)].
// Games with a single logical outcome are rejected (nothing to exclude).
GameValue err_probability(const GameEnsemble& game, const State& rho, const POVMSet& m);

// Build the witness-derived discrimination game for the pair (rho, M).
// The returned ensemble has prior p_x, one instrument per measurement
// setting, l + J outcomes stored as l measure-and-prepare branches
//   eta |-> tr[alpha Z^rho eta] * Z_{b|y} / p(y)
// plus one stored tail of multiplicity J whose branches each map
//   eta |-> (1/J) (1 - F_y(eta)) * chi.
// Throws FreeInputGameError when both robustness values are <= 1e-7.
std::pair<GameEnsemble, DiscGameCertificate> build_disc_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x, std::size_t j, const State& chi);

// Same with chi defaulting to the maximally mixed state.
std::pair<GameEnsemble, DiscGameCertificate> build_disc_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x, std::size_t j = 10000);

// Build the witness-derived exclusion game: l measure-and-prepare branches
//   eta |-> tr[beta Y^rho eta] * Y_{b|y} / p(y)
// plus a final branch eta |-> (1 - G_y(eta)) * xi_y. Throws
// FreeInputGameError when both weight values are <= 1e-7.
std::pair<GameEnsemble, ExclGameCertificate> build_excl_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x, const std::vector<std::vector<double>>& pb_given_y);

// Same with a uniform conditional PMF p(b|y).
std::pair<GameEnsemble, ExclGameCertificate> build_excl_game(
    const State& rho, const POVMSet& m, const FreeStateSet& f, const FreePOVMSetFamily& ff,
    const std::vector<double>& p_x);

// Draw n pairs (free state, free POVM set) with the given shape,
// deterministically in the seed. MaxMixedCone yields the maximally mixed
// state; Incoherent yields random diagonal states; Compatible yields a random
// parent pushed through random deterministic post-processing (verified
// compatible). CustomConic families are not supported and throw
// ValidationError.
std::vector<std::pair<State, POVMSet>> sample_free_pairs(
    const FreeStateSet& f, const FreePOVMSetFamily& ff, std::size_t d, std::size_t settings,
    std::size_t outcomes, std::size_t n, std::uint64_t seed);

// One entry of the generic-game spot check: the pair's value on a random
// game against the exact optimum over free pairs on the same game.
struct GenericGameCheck {
    double resourceful_value = 0.0;
    double best_free_value = 0.0;
    bool ok = false;
};

// Discrimination branch of a verification run. pass requires the ratio,
// empirical, and generic checks; identity_ok is recorded alongside.
struct DiscriminationReport {
    double state_robustness = 0.0;
    double set_robustness = 0.0;
    double alpha = 0.0;
    std::size_t j = 0;
    double numerator = 0.0;             // succ_probability on (rho, M)
    double analytic_denominator = 0.0;  // alpha + 1/J
    double empirical_denominator = 0.0; // max over sampled free pairs
    std::vector<double> sample_values;  // per sampled free pair, seed order
    double ratio_lower = 0.0;           // numerator / analytic_denominator
    double target = 0.0;                // (1 + R_F)(1 + R_FF)
    bool identity_ok = false;   // numerator >= alpha * target - 1e-7
    bool ratio_ok = false;      // ratio_lower >= target * (1 - 2/J - 1e-6)
    bool empirical_ok = false;  // empirical_denominator <= alpha + 1/J + 1e-9
    bool generic_ok = false;    // every generic game within target * (1 + 1e-6)
    std::vector<GenericGameCheck> generic_games;
    bool pass = false;  // ratio_ok && empirical_ok && generic_ok
};

// Exclusion branch of a verification run. pass requires all four checks.
struct ExclusionReport {
    double state_weight = 0.0;
    double set_weight = 0.0;
    double beta = 0.0;
    double numerator = 0.0;          // err_probability on (rho, M)
    double analytic_bound = 0.0;     // beta * (1 - W_F)(1 - W_FF)
    double empirical_minimum = 0.0;  // min over sampled free pairs
    std::vector<double> sample_values;
    double ratio_upper = 0.0;  // numerator / beta
    double target = 0.0;       // (1 - W_F)(1 - W_FF)
    bool identity_ok = false;   // numerator <= analytic_bound + 1e-7
    bool empirical_ok = false;  // empirical_minimum >= beta - 1e-9
    bool ratio_ok = false;      // ratio_upper <= target + 1e-6
    bool generic_ok = false;    // err >= target * best_free - 1e-6 per game
    std::vector<GenericGameCheck> generic_games;
    bool pass = false;  // all four checks
};

// Outcome of an end-to-end verification. Quantum verifiers fill exactly one
// branch; the general-probabilistic verifier fills both. Wall-clock fields
// are the only non-deterministic content.
struct VerificationReport {
    std::optional<DiscriminationReport> discrimination;
    std::optional<ExclusionReport> exclusion;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    double wall_ms_total = 0.0;
    double wall_ms_quantifiers = 0.0;
    double wall_ms_sampling = 0.0;
    double wall_ms_generic = 0.0;
};

// End-to-end check of the multiplicative discrimination advantage: builds the
// witness game at the given J (uniform p_x, maximally mixed chi), evaluates
// the resourceful pair against the analytic denominator alpha + 1/J, samples
// n_samples free pairs, and spot-checks 20 random games against the exact
// best free response. Deterministic in the seed.
VerificationReport verify_discrimination_advantage(const State& rho, const POVMSet& m,
                                                   const FreeStateSet& f,
                                                   const FreePOVMSetFamily& ff, std::size_t j,
                                                   std::size_t n_samples, std::uint64_t seed);

// Exclusion counterpart: witness game with uniform p_x and uniform p(b|y),
// analytic floor beta, and the generic lower-bound spot check.
VerificationReport verify_exclusion_advantage(const State& rho, const POVMSet& m,
                                              const FreeStateSet& f, const FreePOVMSetFamily& ff,
                                              std::size_t n_samples, std::uint64_t seed);

// Exact optimum of a game over free pairs: extreme free states crossed with
// deterministic strategies, with the per-strategy optimum over compatible
// sets solved as a parent SDP (or an exhaustive scan of CustomConic
// generators). maximize=true gives the discrimination denominator,
// maximize=false the exclusion floor.
double best_free_response(const GameEnsemble& game, const FreeStateSet& f,
                          const FreePOVMSetFamily& ff, std::size_t settings,
                          std::size_t outcomes, bool maximize);

}  // namespace resgames
