#pragma once

#include <cstddef>
#include <vector>

#include "resgames/conic.hpp"
#include "resgames/linalg.hpp"
#include "resgames/objects.hpp"

namespace resgames {

// Free sets of states, described as closed convex cones inside PSD. The free
// *states* are the trace-one elements of the cone.
struct FreeStateSet {
    enum class Variant {
        MaxMixedCone,  // multiples of the maximally mixed state
        Incoherent,    // diagonal in the computational basis
        CustomConic,   // conic hull of user-supplied PSD generators
    };

    Variant variant = Variant::MaxMixedCone;
    // CustomConic only: PSD generators with positive trace. Free states are
    // normalized conic combinations; generators double as the extreme rays
    // used for witness normalization.
    std::vector<HermitianOperator> generators;

    static FreeStateSet max_mixed() { return {Variant::MaxMixedCone, {}}; }
    static FreeStateSet incoherent() { return {Variant::Incoherent, {}}; }
    static FreeStateSet custom(std::vector<HermitianOperator> generators) {
        return {Variant::CustomConic, std::move(generators)};
    }
};

// Free families of POVM sets.
struct FreePOVMSetFamily {
    enum class Variant {
        Compatible,   // jointly measurable sets (parent POVM exists)
        CustomConic,  // convex hull of user-supplied POVM sets
    };

    Variant variant = Variant::Compatible;
    // CustomConic only: the generator POVM sets (all shaped like the measured
    // object). They are the extreme points used for witness normalization.
    std::vector<POVMSet> generators;

    static FreePOVMSetFamily compatible() { return {Variant::Compatible, {}}; }
    static FreePOVMSetFamily custom(std::vector<POVMSet> generators) {
        return {Variant::CustomConic, std::move(generators)};
    }
};

// Deterministic response functions D(a|x,lambda) with lambda ranging over all
// outcomes^settings functions from settings to outcomes, encoded base
// `outcomes`: response(lambda, x) is digit x of lambda.
class CompatibilityModel {
public:
    // Throws EnumerationCapError when outcomes^settings exceeds 4096.
    CompatibilityModel(std::size_t settings, std::size_t outcomes);

    std::size_t settings() const { return settings_; }
    std::size_t outcomes() const { return outcomes_; }
    std::size_t num_lambdas() const { return num_lambdas_; }
    std::size_t response(std::size_t lambda, std::size_t x) const;
    bool d(std::size_t a, std::size_t x, std::size_t lambda) const {
        return response(lambda, x) == a;
    }

private:
    std::size_t settings_, outcomes_, num_lambdas_;
};

enum class QuantifierKind { RobustnessState, RobustnessPOVMSet, WeightState, WeightPOVMSet };

struct QuantifierDiagnostics {
    double gap = 0.0;             // |primal - dual| of the underlying solve
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    // True when the solver exhausted its budget but the returned point passed
    // residual verification at 5e-7 and was accepted.
    bool accepted_after_budget = false;
};

// Result of a quantifier solve. State quantifiers fill `witness` (Z for
// robustness, Y for weight) and `free_state` (the optimal free state, or zero
// when the free component vanishes). POVM-set quantifiers fill `witness_set`
// and `free_set`, both indexed [x][a]. Witnesses are returned normalized: the
// free-family pairing bound is tight (max pairing = 1 for robustness, min
// pairing = 1 for weight).
struct QuantifierResult {
    QuantifierKind kind = QuantifierKind::RobustnessState;
    double value = 0.0;
    HermitianOperator witness = HermitianOperator::zero(1);
    std::vector<std::vector<HermitianOperator>> witness_set;  // [x][a]
    HermitianOperator free_state = HermitianOperator::zero(1);
    std::vector<std::vector<HermitianOperator>> free_set;  // [x][a]
    QuantifierDiagnostics diagnostics;
};

// Generalised robustness R_F(rho): least r such that (rho + r omega)/(1+r) is
// free for some state omega. The witness satisfies Z >= 0, tr[Z sigma] <= 1
// for all free sigma, tr[Z rho] = 1 + value.
QuantifierResult robustness_state(const State& rho, const FreeStateSet& f);

// Weight W_F(rho): least w such that rho = w omega + (1-w) sigma with sigma
// free. The witness satisfies Y >= 0, tr[Y sigma] >= 1 for all free sigma,
// tr[Y rho] = 1 - value.
QuantifierResult weight_state(const State& rho, const FreeStateSet& f);

// Generalised robustness of a POVM set against a free family; witnesses
// {Z_{a,x}} satisfy Z_{a,x} >= 0, sum_{a,x} tr[Z_{a,x} N_{a|x}] <= 1 for all
// free N, and sum tr[Z_{a,x} M_{a|x}] = 1 + value.
QuantifierResult robustness_povmset(const POVMSet& m, const FreePOVMSetFamily& f);

// Weight of a POVM set; witnesses {Y_{a,x}} satisfy Y_{a,x} >= 0,
// sum tr[Y_{a,x} N_{a|x}] >= 1 for all free N, and
// sum tr[Y_{a,x} M_{a|x}] = 1 - value.
QuantifierResult weight_povmset(const POVMSet& m, const FreePOVMSetFamily& f);

// Rescale the witness so the free-family pairing bound is tight (an
// idempotent operation; quantifier results are already normalized). Throws
// DegenerateWitnessError when the extremal pairing is not positive.
QuantifierResult normalize_witness(QuantifierResult result, const FreeStateSet& f);
QuantifierResult normalize_witness(QuantifierResult result, const FreePOVMSetFamily& f);

// Extremal pairing over parent POVMs: max (or min) of
// sum_lambda tr[G_lambda w_lambda] over G_lambda >= 0 with
// sum_lambda G_lambda = I. This is the value a compatible POVM set can reach
// against per-lambda weights, used for witness normalization and for exact
// best-free-response bounds.
double compatible_pairing_bound(const std::vector<HermitianOperator>& w, bool maximize);

struct CompatibilityResult {
    bool compatible = false;
    // Robustness of incompatibility underlying the decision.
    double value = 0.0;
    // Compatible: parent POVM {G_lambda} with
    // sum_lambda D(a|x,lambda) G_lambda = M_{a|x}; index with
    // CompatibilityModel(settings, outcomes).
    std::vector<HermitianOperator> parent;
    // Incompatible: normalized separating witness, indexed [x][a].
    std::vector<std::vector<HermitianOperator>> witness;
};

// Joint-measurability test via the robustness program: compatible iff
// R(M) <= tol.
CompatibilityResult is_compatible(const POVMSet& m, double tol = 1e-7);

}  // namespace resgames
