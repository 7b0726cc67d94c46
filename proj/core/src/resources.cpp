#include "resgames/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "resgames/errors.hpp"

namespace resgames {

namespace {

constexpr std::size_t kLambdaCap = 4096;

double trace_of(const HermitianOperator& h) {
    double t = 0.0;
    for (std::size_t i = 0; i < h.dim(); ++i) t += h(i, i).real();
    return t;
}

// Acceptance policy shared by every quantifier solve: Optimal is accepted
// as-is; an exhausted budget is accepted only when the returned point still
// passes residual verification at 5e-7; everything else is a failure.
Solution solve_accepted(const ConicProgram& prog, const std::string& what,
                        QuantifierDiagnostics* diag) {
    Solution sol = solve(prog);
    if (sol.status == SolveStatus::Infeasible) {
        throw SolverError(what +
                          ": program infeasible (the free set cannot reach the target object)");
    }
    if (sol.status == SolveStatus::Unbounded) {
        throw SolverError(what + ": program unbounded");
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

// ---------------------------------------------------------------------------
// Free state sets.

void check_custom_state_generators(const FreeStateSet& f, std::size_t dim) {
    if (f.generators.empty()) {
        throw ValidationError("custom free state set: at least one generator is required");
    }
    for (const auto& g : f.generators) {
        if (g.dim() != dim) {
            throw DimensionError("custom free state set: generator dimension mismatch");
        }
        if (!is_psd(g)) {
            throw ValidationError("custom free state set: generators must be PSD");
        }
        if (trace_of(g) <= 1e-12) {
            throw ValidationError("custom free state set: generators need positive trace");
        }
    }
}

// Generators of the free cone as (operator, trace) pairs; free states are the
// trace-one conic combinations.
std::vector<HermitianOperator> state_cone_generators(const FreeStateSet& f, std::size_t dim) {
    switch (f.variant) {
        case FreeStateSet::Variant::MaxMixedCone:
            return {(1.0 / static_cast<double>(dim)) * HermitianOperator::identity(dim)};
        case FreeStateSet::Variant::Incoherent: {
            std::vector<HermitianOperator> gens;
            gens.reserve(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                std::vector<double> e(dim, 0.0);
                e[i] = 1.0;
                gens.push_back(HermitianOperator::diagonal(e));
            }
            return gens;
        }
        case FreeStateSet::Variant::CustomConic:
            check_custom_state_generators(f, dim);
            return f.generators;
    }
    throw ValidationError("free state set: unknown variant");
}

struct StateParts {
    ProgramBuilder pb;
    std::size_t coeff_var = 0;
    std::size_t cons = 0;
    std::vector<HermitianOperator> gens;
};

// min (+/-) tr[sigma]  s.t.  sigma -/+ N = rho,  sigma in free cone,  N >= 0.
StateParts build_state_program(const State& rho, const FreeStateSet& f, bool robustness) {
    StateParts parts;
    parts.gens = state_cone_generators(f, rho.dim());
    auto& pb = parts.pb;
    parts.coeff_var = pb.add_nonneg_var(parts.gens.size());
    const std::size_t n_var = pb.add_psd_var(rho.dim());
    parts.cons = pb.add_matrix_constraint(rho.matrix());
    const double obj_sign = robustness ? 1.0 : -1.0;
    for (std::size_t k = 0; k < parts.gens.size(); ++k) {
        pb.add_matrix_term(parts.cons, parts.coeff_var, k, parts.gens[k]);
        pb.add_objective_term(parts.coeff_var, k, obj_sign * trace_of(parts.gens[k]));
    }
    pb.add_matrix_term(parts.cons, n_var, robustness ? -1.0 : 1.0);
    return parts;
}

HermitianOperator free_component(const StateParts& parts, const Solution& sol, std::size_t dim) {
    HermitianOperator sigma = HermitianOperator::zero(dim);
    for (std::size_t k = 0; k < parts.gens.size(); ++k) {
        sigma = sigma + parts.pb.scalar_value(sol.x, parts.coeff_var, k) * parts.gens[k];
    }
    return sigma;
}

HermitianOperator normalized_or_zero(const HermitianOperator& sigma) {
    const double t = trace_of(sigma);
    if (t <= 1e-9) return HermitianOperator::zero(sigma.dim());
    return (1.0 / t) * sigma;
}

// Extremal pairing of a witness against the free states: max (robustness) or
// min (weight) of tr[w sigma] over free sigma, attained on normalized
// generators.
double state_pairing_scale(const HermitianOperator& w, const FreeStateSet& f, bool maximize) {
    const auto gens = state_cone_generators(f, w.dim());
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (const auto& g : gens) {
        const double v = trace_inner(w, g) / trace_of(g);
        best = maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Free POVM-set families.

void check_custom_povm_generators(const FreePOVMSetFamily& f, const POVMSet& m) {
    if (f.generators.empty()) {
        throw ValidationError("custom free POVM-set family: at least one generator is required");
    }
    for (const auto& g : f.generators) {
        if (g.dim() != m.dim() || g.settings() != m.settings() || g.outcomes() != m.outcomes()) {
            throw DimensionError("custom free POVM-set family: generator shape mismatch");
        }
    }
}

struct PovmParts {
    ProgramBuilder pb;
    std::vector<std::size_t> g_vars;             // Compatible: one PSD var per lambda
    std::size_t t_var = 0;                       // Compatible: scale variable
    std::size_t coeff_var = 0;                   // CustomConic: conic coefficients
    std::vector<std::vector<std::size_t>> cons;  // [x][a] matrix constraints
    bool compatible = false;
};

// Compatible, robustness:  min t    s.t. sum_l D(a|x,l) G_l - S_{a,x} = M_{a|x},
//                                        sum_l G_l - t I = 0,  G, S >= 0, t >= 0.
// Compatible, weight:      min -t   with slack sign flipped (sum D G + S = M).
// CustomConic replaces {G_l, t} by conic coefficients over the generator POVM
// sets and drops the completeness rows (each generator already resolves the
// identity, so the cone coefficient sum plays the role of t).
PovmParts build_povm_program(const POVMSet& m, const FreePOVMSetFamily& f, bool robustness) {
    const std::size_t d = m.dim();
    const std::size_t nx = m.settings();
    const std::size_t na = m.outcomes();
    const double slack_sign = robustness ? -1.0 : 1.0;
    const double obj_sign = robustness ? 1.0 : -1.0;

    PovmParts parts;
    parts.compatible = f.variant == FreePOVMSetFamily::Variant::Compatible;
    auto& pb = parts.pb;

    if (parts.compatible) {
        const CompatibilityModel model(nx, na);
        parts.t_var = pb.add_nonneg_var(1);
        pb.add_objective_term(parts.t_var, 0, obj_sign);
        parts.g_vars.reserve(model.num_lambdas());
        for (std::size_t l = 0; l < model.num_lambdas(); ++l) {
            parts.g_vars.push_back(pb.add_psd_var(d));
        }
        parts.cons.resize(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t a = 0; a < na; ++a) {
                const std::size_t slack = pb.add_psd_var(d);
                const std::size_t cons = pb.add_matrix_constraint(m.effect(a, x));
                for (std::size_t l = 0; l < model.num_lambdas(); ++l) {
                    if (model.response(l, x) == a) pb.add_matrix_term(cons, parts.g_vars[l], 1.0);
                }
                pb.add_matrix_term(cons, slack, slack_sign);
                parts.cons[x].push_back(cons);
            }
        }
        const std::size_t completeness =
            pb.add_matrix_constraint(HermitianOperator::zero(d));
        for (std::size_t l = 0; l < model.num_lambdas(); ++l) {
            pb.add_matrix_term(completeness, parts.g_vars[l], 1.0);
        }
        pb.add_matrix_term(completeness, parts.t_var, 0,
                           -1.0 * HermitianOperator::identity(d));
    } else {
        check_custom_povm_generators(f, m);
        const std::size_t num_gens = f.generators.size();
        parts.coeff_var = pb.add_nonneg_var(num_gens);
        for (std::size_t g = 0; g < num_gens; ++g) {
            pb.add_objective_term(parts.coeff_var, g, obj_sign);
        }
        parts.cons.resize(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t a = 0; a < na; ++a) {
                const std::size_t slack = pb.add_psd_var(d);
                const std::size_t cons = pb.add_matrix_constraint(m.effect(a, x));
                for (std::size_t g = 0; g < num_gens; ++g) {
                    pb.add_matrix_term(cons, parts.coeff_var, g, f.generators[g].effect(a, x));
                }
                pb.add_matrix_term(cons, slack, slack_sign);
                parts.cons[x].push_back(cons);
            }
        }
    }
    return parts;
}

// Free component sigma_{a|x} of the primal optimizer and its scale: the pair
// (sum of cone coefficients, effects), so that sigma / scale is a POVM set.
std::pair<double, std::vector<std::vector<HermitianOperator>>> povm_free_component(
    const PovmParts& parts, const POVMSet& m, const FreePOVMSetFamily& f, const Solution& sol) {
    const std::size_t d = m.dim();
    const std::size_t nx = m.settings();
    const std::size_t na = m.outcomes();
    std::vector<std::vector<HermitianOperator>> sigma(
        nx, std::vector<HermitianOperator>(na, HermitianOperator::zero(d)));
    double scale = 0.0;
    if (parts.compatible) {
        const CompatibilityModel model(nx, na);
        scale = parts.pb.scalar_value(sol.x, parts.t_var, 0);
        for (std::size_t l = 0; l < model.num_lambdas(); ++l) {
            const HermitianOperator g = parts.pb.psd_value(sol.x, parts.g_vars[l]);
            for (std::size_t x = 0; x < nx; ++x) {
                auto& cell = sigma[x][model.response(l, x)];
                cell = cell + g;
            }
        }
    } else {
        for (std::size_t g = 0; g < f.generators.size(); ++g) {
            const double c = parts.pb.scalar_value(sol.x, parts.coeff_var, g);
            scale += c;
            for (std::size_t x = 0; x < nx; ++x) {
                for (std::size_t a = 0; a < na; ++a) {
                    sigma[x][a] = sigma[x][a] + c * f.generators[g].effect(a, x);
                }
            }
        }
    }
    return {scale, std::move(sigma)};
}

std::vector<std::vector<HermitianOperator>> scaled_or_zero(
    std::vector<std::vector<HermitianOperator>> sigma, double scale) {
    if (scale <= 1e-9) {
        for (auto& row : sigma) {
            for (auto& e : row) e = HermitianOperator::zero(e.dim());
        }
        return sigma;
    }
    for (auto& row : sigma) {
        for (auto& e : row) e = (1.0 / scale) * e;
    }
    return sigma;
}

// Extremal pairing of a POVM-set witness against the free family.
double povm_pairing_scale(const std::vector<std::vector<HermitianOperator>>& w,
                          const FreePOVMSetFamily& f, bool maximize) {
    if (w.empty() || w.front().empty()) {
        throw ValidationError("normalize_witness: POVM-set witness is empty");
    }
    const std::size_t nx = w.size();
    const std::size_t na = w.front().size();
    const std::size_t d = w.front().front().dim();
    if (f.variant == FreePOVMSetFamily::Variant::Compatible) {
        const CompatibilityModel model(nx, na);
        std::vector<HermitianOperator> per_lambda;
        per_lambda.reserve(model.num_lambdas());
        for (std::size_t l = 0; l < model.num_lambdas(); ++l) {
            HermitianOperator sum = HermitianOperator::zero(d);
            for (std::size_t x = 0; x < nx; ++x) sum = sum + w[x][model.response(l, x)];
            per_lambda.push_back(sum);
        }
        return compatible_pairing_bound(per_lambda, maximize);
    }
    if (f.generators.empty()) {
        throw ValidationError("custom free POVM-set family: at least one generator is required");
    }
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (const auto& gen : f.generators) {
        if (gen.dim() != d || gen.settings() != nx || gen.outcomes() != na) {
            throw DimensionError("custom free POVM-set family: generator shape mismatch");
        }
        double v = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t a = 0; a < na; ++a) {
                v += trace_inner(w[x][a], gen.effect(a, x));
            }
        }
        best = maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

QuantifierResult robustness_povmset_impl(const POVMSet& m, const FreePOVMSetFamily& f,
                                         std::vector<HermitianOperator>* parent_out) {
    PovmParts parts = build_povm_program(m, f, true);
    const ConicProgram prog = parts.pb.build();
    QuantifierResult res;
    res.kind = QuantifierKind::RobustnessPOVMSet;
    const Solution sol = solve_accepted(prog, "robustness_povmset", &res.diagnostics);
    res.value = std::max(0.0, sol.primal_value - 1.0);
    auto [scale, sigma] = povm_free_component(parts, m, f, sol);
    res.free_set = scaled_or_zero(std::move(sigma), scale);
    res.witness_set.assign(m.settings(), {});
    for (std::size_t x = 0; x < m.settings(); ++x) {
        for (std::size_t a = 0; a < m.outcomes(); ++a) {
            res.witness_set[x].push_back(parts.pb.matrix_dual(sol.y, parts.cons[x][a]));
        }
    }
    if (parent_out != nullptr && parts.compatible) {
        parent_out->clear();
        const double t = std::max(scale, 1.0);
        for (const std::size_t g_var : parts.g_vars) {
            parent_out->push_back((1.0 / t) * parts.pb.psd_value(sol.x, g_var));
        }
    }
    return normalize_witness(std::move(res), f);
}

}  // namespace

// ---------------------------------------------------------------------------
// Compatibility model.

CompatibilityModel::CompatibilityModel(std::size_t settings, std::size_t outcomes)
    : settings_(settings), outcomes_(outcomes), num_lambdas_(1) {
    if (settings == 0 || outcomes == 0) {
        throw DimensionError("compatibility model: settings and outcomes must be positive");
    }
    for (std::size_t x = 0; x < settings_; ++x) {
        if (num_lambdas_ > kLambdaCap / outcomes_) {
            throw EnumerationCapError(
                "compatibility model: outcomes^settings exceeds the enumeration cap of " +
                std::to_string(kLambdaCap) + " response functions");
        }
        num_lambdas_ *= outcomes_;
    }
}

std::size_t CompatibilityModel::response(std::size_t lambda, std::size_t x) const {
    if (lambda >= num_lambdas_ || x >= settings_) {
        throw DimensionError("compatibility model: index out of range");
    }
    for (std::size_t i = 0; i < x; ++i) lambda /= outcomes_;
    return lambda % outcomes_;
}

// ---------------------------------------------------------------------------
// Quantifiers.

QuantifierResult robustness_state(const State& rho, const FreeStateSet& f) {
    StateParts parts = build_state_program(rho, f, true);
    const ConicProgram prog = parts.pb.build();
    QuantifierResult res;
    res.kind = QuantifierKind::RobustnessState;
    const Solution sol = solve_accepted(prog, "robustness_state", &res.diagnostics);
    res.value = std::max(0.0, sol.primal_value - 1.0);
    res.free_state = normalized_or_zero(free_component(parts, sol, rho.dim()));
    res.witness = parts.pb.matrix_dual(sol.y, parts.cons);
    return normalize_witness(std::move(res), f);
}

QuantifierResult weight_state(const State& rho, const FreeStateSet& f) {
    StateParts parts = build_state_program(rho, f, false);
    const ConicProgram prog = parts.pb.build();
    QuantifierResult res;
    res.kind = QuantifierKind::WeightState;
    const Solution sol = solve_accepted(prog, "weight_state", &res.diagnostics);
    res.value = std::min(1.0, std::max(0.0, 1.0 + sol.primal_value));
    res.free_state = normalized_or_zero(free_component(parts, sol, rho.dim()));
    res.witness = -1.0 * parts.pb.matrix_dual(sol.y, parts.cons);
    return normalize_witness(std::move(res), f);
}

QuantifierResult robustness_povmset(const POVMSet& m, const FreePOVMSetFamily& f) {
    return robustness_povmset_impl(m, f, nullptr);
}

QuantifierResult weight_povmset(const POVMSet& m, const FreePOVMSetFamily& f) {
    PovmParts parts = build_povm_program(m, f, false);
    const ConicProgram prog = parts.pb.build();
    QuantifierResult res;
    res.kind = QuantifierKind::WeightPOVMSet;
    const Solution sol = solve_accepted(prog, "weight_povmset", &res.diagnostics);
    res.value = std::min(1.0, std::max(0.0, 1.0 + sol.primal_value));
    auto [scale, sigma] = povm_free_component(parts, m, f, sol);
    res.free_set = scaled_or_zero(std::move(sigma), scale);
    res.witness_set.assign(m.settings(), {});
    for (std::size_t x = 0; x < m.settings(); ++x) {
        for (std::size_t a = 0; a < m.outcomes(); ++a) {
            res.witness_set[x].push_back(-1.0 *
                                         parts.pb.matrix_dual(sol.y, parts.cons[x][a]));
        }
    }
    return normalize_witness(std::move(res), f);
}

// ---------------------------------------------------------------------------
// Witness normalization.

QuantifierResult normalize_witness(QuantifierResult result, const FreeStateSet& f) {
    const bool robust = result.kind == QuantifierKind::RobustnessState;
    if (!robust && result.kind != QuantifierKind::WeightState) {
        throw ValidationError("normalize_witness: state free set given for a POVM-set result");
    }
    const double mu = state_pairing_scale(result.witness, f, robust);
    if (!(mu > 0.0)) {
        throw DegenerateWitnessError("normalize_witness: extremal free pairing is " +
                                     std::to_string(mu) + ", expected positive");
    }
    result.witness = (1.0 / mu) * result.witness;
    return result;
}

QuantifierResult normalize_witness(QuantifierResult result, const FreePOVMSetFamily& f) {
    const bool robust = result.kind == QuantifierKind::RobustnessPOVMSet;
    if (!robust && result.kind != QuantifierKind::WeightPOVMSet) {
        throw ValidationError("normalize_witness: POVM-set family given for a state result");
    }
    const double mu = povm_pairing_scale(result.witness_set, f, robust);
    if (!(mu > 0.0)) {
        throw DegenerateWitnessError("normalize_witness: extremal free pairing is " +
                                     std::to_string(mu) + ", expected positive");
    }
    for (auto& row : result.witness_set) {
        for (auto& w : row) w = (1.0 / mu) * w;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Parent pairing bound and compatibility decision.

double compatible_pairing_bound(const std::vector<HermitianOperator>& w, bool maximize) {
    if (w.empty()) {
        throw ValidationError("compatible_pairing_bound: at least one weight is required");
    }
    const std::size_t d = w.front().dim();
    for (const auto& h : w) {
        if (h.dim() != d) {
            throw DimensionError("compatible_pairing_bound: weight dimension mismatch");
        }
    }
    ProgramBuilder pb;
    std::vector<std::size_t> g_vars;
    g_vars.reserve(w.size());
    for (std::size_t l = 0; l < w.size(); ++l) g_vars.push_back(pb.add_psd_var(d));
    const std::size_t cons = pb.add_matrix_constraint(HermitianOperator::identity(d));
    for (std::size_t l = 0; l < w.size(); ++l) {
        pb.add_matrix_term(cons, g_vars[l], 1.0);
        pb.add_objective_term(g_vars[l], maximize ? -1.0 * w[l] : w[l]);
    }
    const Solution sol = solve_accepted(pb.build(), "compatible_pairing_bound", nullptr);
    return maximize ? -sol.primal_value : sol.primal_value;
}

CompatibilityResult is_compatible(const POVMSet& m, double tol) {
    std::vector<HermitianOperator> parent;
    QuantifierResult r = robustness_povmset_impl(m, FreePOVMSetFamily::compatible(), &parent);
    CompatibilityResult out;
    out.value = r.value;
    out.compatible = r.value <= tol;
    if (out.compatible) {
        out.parent = std::move(parent);
    } else {
        out.witness = std::move(r.witness_set);
    }
    return out;
}

}  // namespace resgames
