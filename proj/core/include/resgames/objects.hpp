#pragma once

#include <cstdint>
#include <vector>

#include "resgames/linalg.hpp"

namespace resgames {

// Trace-one PSD operator (density matrix). Construction validates both
// invariants at tolerance 1e-9 and throws ValidationError on failure.
class State {
public:
    explicit State(HermitianOperator rho);

    std::size_t dim() const { return rho_.dim(); }
    const HermitianOperator& matrix() const { return rho_; }

private:
    HermitianOperator rho_;
};

// Indexed family of POVMs {M_{a|x}}: `settings` measurements (index x), each
// with `outcomes` effects (index a). Every effect must be PSD and each
// setting must satisfy sum_a M_{a|x} = I, both at tolerance 1e-9.
class POVMSet {
public:
    // effects_by_setting[x][a] = M_{a|x}; all settings need the same number
    // of outcomes and all effects the same dimension.
    explicit POVMSet(std::vector<std::vector<HermitianOperator>> effects_by_setting);

    std::size_t dim() const { return dim_; }
    std::size_t settings() const { return effects_.size(); }
    std::size_t outcomes() const { return effects_.front().size(); }
    // M_{a|x}: outcome a of measurement x.
    const HermitianOperator& effect(std::size_t a, std::size_t x) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<HermitianOperator>> effects_;  // [x][a]
};

// Completely positive trace-nonincreasing map, in one of two representations:
//   MeasurePrepare: rho -> tr[E rho] * K with E, K PSD and
//                   operator_norm(E) * tr[K] <= 1 (+1e-9),
//   Choi:           C PSD on in_dim*out_dim with tr_out[C] <= I (+1e-9),
//                   acting as rho -> tr_in[(rho^T (x) I) C].
// The Choi basis convention matches partial_trace: row index =
// i_in * out_dim + i_out, so the traced-out output factor is Second.
class Subchannel {
public:
    enum class Kind { MeasurePrepare, Choi };

    static Subchannel measure_prepare(HermitianOperator effect, HermitianOperator preparation);
    static Subchannel choi(HermitianOperator c, std::size_t in_dim, std::size_t out_dim);

    Kind kind() const { return kind_; }
    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }

    // MeasurePrepare accessors; throw ValidationError for Choi subchannels.
    const HermitianOperator& effect() const;
    const HermitianOperator& preparation() const;
    // Choi accessor; throws ValidationError for MeasurePrepare subchannels.
    const HermitianOperator& choi_matrix() const;

    // Choi matrix of this map (E^T (x) K for MeasurePrepare).
    Subchannel to_choi() const;

private:
    Subchannel() = default;
    Kind kind_ = Kind::MeasurePrepare;
    std::size_t in_dim_ = 0, out_dim_ = 0;
    // Placeholder-initialized; the factories overwrite the relevant members.
    HermitianOperator e_ = HermitianOperator::zero(1);  // MeasurePrepare
    HermitianOperator k_ = HermitianOperator::zero(1);  // MeasurePrepare
    HermitianOperator c_ = HermitianOperator::zero(1);  // Choi
};

// Apply a subchannel to an (arbitrary Hermitian) input; linear in the input.
HermitianOperator apply(const Subchannel& sc, const HermitianOperator& input);
// Apply to a state; the output is PSD with trace in [0, 1].
HermitianOperator apply(const Subchannel& sc, const State& rho);

// Family of instruments {phi_{b|y}}: `settings` instruments (index y), each a
// list of `outcomes` subchannels (index b) summing to a trace-preserving map.
// Trace preservation is validated at tolerance 1e-9 by applying the sum to a
// spanning set of d^2 Hermitian inputs. All subchannels must share in_dim.
class InstrumentSet {
public:
    explicit InstrumentSet(std::vector<std::vector<Subchannel>> subchannels_by_setting);

    std::size_t settings() const { return sub_.size(); }
    std::size_t outcomes() const { return sub_.front().size(); }
    std::size_t in_dim() const { return sub_.front().front().in_dim(); }
    // phi_{b|y}: outcome b of instrument y.
    const Subchannel& subchannel(std::size_t b, std::size_t y) const;

private:
    std::vector<std::vector<Subchannel>> sub_;  // [y][b]
};

// An instrument ensemble with a full-support prior over settings: the game
// object {p_Y, Phi_{B|Y}}. Prior entries must be strictly positive and sum
// to 1 within 1e-12.
//
// tail_multiplicity compresses games whose last outcome stands for many
// identical branches: when it is J > 1, the stored last subchannel of every
// setting is the SUM of J identical subchannels, so the playable game has
// outcomes() - 1 + J outcomes and each tail branch acts as (1/J) times the
// stored map. The stored instrument set is therefore still exactly
// trace-preserving and games with huge outcome counts stay O(1) in memory.
class GameEnsemble {
public:
    GameEnsemble(std::vector<double> prior, InstrumentSet instruments,
                 std::size_t tail_multiplicity = 1);

    const std::vector<double>& prior() const { return prior_; }
    const InstrumentSet& instruments() const { return instruments_; }
    std::size_t tail_multiplicity() const { return tail_multiplicity_; }
    // Number of outcomes of the game actually being played (tail expanded).
    std::size_t logical_outcomes() const {
        return instruments_.outcomes() - 1 + tail_multiplicity_;
    }

private:
    std::vector<double> prior_;
    InstrumentSet instruments_;
    std::size_t tail_multiplicity_ = 1;
};

// Classical pre/post-processing strategy {q_Z, r(x|y,z), s(g|a,y,z)}: shared
// randomness z, input relabeling r and outcome post-processing s. Every
// distribution must be nonnegative and normalized within 1e-12.
class Strategy {
public:
    // Layouts: q[z]; r[(y*num_z + z)*num_x + x]; s[((y*num_z + z)*num_a + a)*num_out + g].
    Strategy(std::size_t num_z, std::size_t num_x, std::size_t num_y, std::size_t num_a,
             std::size_t num_out, std::vector<double> q, std::vector<double> r,
             std::vector<double> s);

    std::size_t num_z() const { return num_z_; }
    std::size_t num_x() const { return num_x_; }
    std::size_t num_y() const { return num_y_; }
    std::size_t num_a() const { return num_a_; }
    std::size_t num_out() const { return num_out_; }

    double q(std::size_t z) const { return q_[z]; }
    double r(std::size_t x, std::size_t y, std::size_t z) const {
        return r_[(y * num_z_ + z) * num_x_ + x];
    }
    double s(std::size_t g, std::size_t a, std::size_t y, std::size_t z) const {
        return s_[((y * num_z_ + z) * num_a_ + a) * num_out_ + g];
    }

private:
    std::size_t num_z_, num_x_, num_y_, num_a_, num_out_;
    std::vector<double> q_, r_, s_;
};

// Deterministic strategy: an input choice per setting and an outcome
// relabeling per (outcome, setting) pair — the extreme points over which the
// best classical performance is attained.
struct DeterministicStrategy {
    std::vector<std::size_t> x_of_y;               // y -> x
    std::vector<std::vector<std::size_t>> g_of_ay;  // [y][a] -> g
};

// Embed a deterministic strategy as a Strategy with a singleton z.
Strategy to_strategy(const DeterministicStrategy& det, std::size_t num_x, std::size_t num_a,
                     std::size_t num_out);

// N_{b|y} = sum_{a,x,z} s(b|a,y,z) r(x|y,z) q(z) M_{a|x}. The strategy's
// index ranges must match M (num_x = settings, num_a = outcomes) and the
// requested output shape.
POVMSet simulate(const POVMSet& m, const Strategy& strat, std::size_t out_settings,
                 std::size_t out_outcomes);

// Merge outcomes keep, keep+1, ..., into outcome number `keep` (1-based
// count): the first keep-1 effects are unchanged and the keep-th becomes the
// sum of all remaining effects.
POVMSet merge_tail_outcomes(const POVMSet& n, std::size_t keep);

// Qubit test family: M_{±|1} = eta (I±Z)/2 + (1-eta) I/2 and
// M_{±|2} = eta (I±X)/2 + (1-eta) I/2, with outcome 0 = "+".
POVMSet noisy_mub_pair(double eta);

// Deterministic-per-seed random objects (full-support constructions).
State random_state(std::size_t d, std::uint64_t seed);
POVMSet random_povm_set(std::size_t d, std::size_t settings, std::size_t outcomes,
                        std::uint64_t seed);
InstrumentSet random_instrument_set(std::size_t d, std::size_t settings, std::size_t outcomes,
                                    std::uint64_t seed);

}  // namespace resgames
