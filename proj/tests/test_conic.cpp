#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "resgames/conic.hpp"
#include "resgames/errors.hpp"
#include "resgames/linalg.hpp"

using namespace resgames;

namespace {

// minimize t  s.t.  t I - Z >= 0, realized with t = t_plus - t_minus.
struct LambdaMaxProgram {
    ProgramBuilder pb;
    std::size_t tv, yv, cons;
    ConicProgram prog;

    explicit LambdaMaxProgram(const HermitianOperator& z) {
        const std::size_t d = z.dim();
        tv = pb.add_nonneg_var(2);
        yv = pb.add_psd_var(d);
        pb.add_objective_term(tv, 0, 1.0);
        pb.add_objective_term(tv, 1, -1.0);
        cons = pb.add_matrix_constraint(z);
        pb.add_matrix_term(cons, tv, 0, HermitianOperator::identity(d));
        pb.add_matrix_term(cons, tv, 1, -1.0 * HermitianOperator::identity(d));
        pb.add_matrix_term(cons, yv, -1.0);
        prog = pb.build();
    }
};

}  // namespace

TEST_CASE("svec/unsvec roundtrip and isometry") {
    std::mt19937_64 rng(3);
    for (std::size_t d : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{5}}) {
        HermitianOperator h = test_helpers::random_hermitian(rng, d);
        HermitianOperator g = test_helpers::random_hermitian(rng, d);
        std::vector<double> vh = svec(h);
        REQUIRE(vh.size() == d * d);
        HermitianOperator back = unsvec(vh, d);
        CHECK(max_abs_entry(back.matrix() - h.matrix()) < 1e-14);

        const std::vector<double> vg = svec(g);
        double euclid = 0.0;
        for (std::size_t i = 0; i < vh.size(); ++i) euclid += vh[i] * vg[i];
        CHECK(euclid == doctest::Approx(trace_inner(h, g)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(unsvec(std::vector<double>{1.0, 2.0}, 2), DimensionError);
}

TEST_CASE("cone spec accounting") {
    ConeSpec cone;
    cone.blocks = {psd_block(3), nonneg_block(4), psd_block(2)};
    CHECK(cone.scalar_dim() == 9 + 4 + 4);
    CHECK(cone.barrier_degree() == doctest::Approx(3 + 4 + 2));
}

TEST_CASE("trivial LP: minimize x subject to x = 1") {
    ProgramBuilder pb;
    const std::size_t xv = pb.add_nonneg_var(1);
    pb.add_objective_term(xv, 0, 1.0);
    const std::size_t cons = pb.add_scalar_constraint(1.0);
    pb.add_scalar_term(cons, xv, 0, 1.0);
    const ConicProgram prog = pb.build();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.dual_value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.gap <= 1e-8);
    CHECK(pb.scalar_value(sol.x, xv, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pb.scalar_dual(sol.y, cons) == doctest::Approx(1.0).epsilon(1e-7));

    const VerifyReport rep = verify_solution(prog, sol, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.primal_residual <= 1e-8);
    CHECK(rep.dual_residual <= 1e-8);
}

TEST_CASE("SDP: minimize t with t I - Z PSD equals the top eigenvalue") {
    SUBCASE("Pauli Z") {
        LambdaMaxProgram lm{HermitianOperator{test_helpers::pauli_z()}};
        const Solution sol = solve(lm.prog);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
        // The matrix-constraint dual is the top eigenprojector |0><0|.
        const HermitianOperator w = lm.pb.matrix_dual(sol.y, lm.cons);
        CHECK(is_psd(w, 1e-7));
        CHECK(trace(w.matrix()).real() == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(w(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(w(1, 1)) < 1e-6);
    }
    SUBCASE("random Hermitian operators") {
        std::mt19937_64 rng(77);
        for (std::size_t d : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
            for (int rep = 0; rep < 4; ++rep) {
                const HermitianOperator z = test_helpers::random_hermitian(rng, d);
                LambdaMaxProgram lm{z};
                const Solution sol = solve(lm.prog);
                REQUIRE(sol.status == SolveStatus::Optimal);
                const double oracle = max_eigenvalue(z);
                CHECK(sol.primal_value ==
                      doctest::Approx(oracle).epsilon(1e-7).scale(std::max(1.0, oracle)));

                const HermitianOperator w = lm.pb.matrix_dual(sol.y, lm.cons);
                CHECK(is_psd(w, 1e-7));
                CHECK(trace(w.matrix()).real() == doctest::Approx(1.0).epsilon(1e-7));
                CHECK(trace_inner(z, w) == doctest::Approx(oracle).epsilon(1e-6));
                // Complementary slackness with the primal slack.
                const HermitianOperator slack =
                    sol.primal_value * HermitianOperator::identity(d) - z;
                CHECK(std::abs(trace_inner(slack, w)) < 1e-6);

                const VerifyReport vr = verify_solution(lm.prog, sol, 1e-6);
                CHECK(vr.pass);
            }
        }
    }
}

TEST_CASE("infeasible LP yields a Farkas certificate") {
    ProgramBuilder pb;
    const std::size_t xv = pb.add_nonneg_var(1);
    pb.add_objective_term(xv, 0, 1.0);
    const std::size_t cons = pb.add_scalar_constraint(-1.0);
    pb.add_scalar_term(cons, xv, 0, 1.0);
    const ConicProgram prog = pb.build();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Infeasible);
    // Certificate: b.y = 1, A^T y + s = 0, s in the cone.
    double by = 0.0;
    for (std::size_t i = 0; i < sol.y.size(); ++i) by += prog.b[i] * sol.y[i];
    CHECK(by == doctest::Approx(1.0).epsilon(1e-9));
    const std::vector<double> aty = prog.a.apply_transpose(sol.y);
    for (std::size_t i = 0; i < aty.size(); ++i) {
        CHECK(std::abs(aty[i] + sol.s[i]) <= 1e-7);
        CHECK(sol.s[i] >= -1e-9);
    }
}

TEST_CASE("contradictory duplicate rows are caught in presolve") {
    ProgramBuilder pb;
    const std::size_t xv = pb.add_nonneg_var(1);
    pb.add_objective_term(xv, 0, 1.0);
    const std::size_t c1 = pb.add_scalar_constraint(1.0);
    pb.add_scalar_term(c1, xv, 0, 1.0);
    const std::size_t c2 = pb.add_scalar_constraint(2.0);
    pb.add_scalar_term(c2, xv, 0, 1.0);
    const ConicProgram prog = pb.build();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Infeasible);
    double by = 0.0;
    for (std::size_t i = 0; i < sol.y.size(); ++i) by += prog.b[i] * sol.y[i];
    CHECK(by == doctest::Approx(1.0).epsilon(1e-9));
    const std::vector<double> aty = prog.a.apply_transpose(sol.y);
    for (double v : aty) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("unbounded problems return an improving ray") {
    SUBCASE("no constraints at all") {
        ProgramBuilder pb;
        const std::size_t xv = pb.add_nonneg_var(1);
        pb.add_objective_term(xv, 0, -1.0);
        const ConicProgram prog = pb.build();
        const Solution sol = solve(prog);
        REQUIRE(sol.status == SolveStatus::Unbounded);
        double cx = 0.0;
        for (std::size_t i = 0; i < prog.c.size(); ++i) cx += prog.c[i] * sol.x[i];
        CHECK(cx == doctest::Approx(-1.0).epsilon(1e-9));
        for (double v : sol.x) CHECK(v >= -1e-9);
    }
    SUBCASE("ray inside the feasible affine space") {
        ProgramBuilder pb;
        const std::size_t xv = pb.add_nonneg_var(2);
        pb.add_objective_term(xv, 0, -1.0);
        pb.add_objective_term(xv, 1, -1.0);
        const std::size_t cons = pb.add_scalar_constraint(0.0);
        pb.add_scalar_term(cons, xv, 0, 1.0);
        pb.add_scalar_term(cons, xv, 1, -1.0);
        const ConicProgram prog = pb.build();
        const Solution sol = solve(prog);
        REQUIRE(sol.status == SolveStatus::Unbounded);
        double cx = 0.0;
        for (std::size_t i = 0; i < prog.c.size(); ++i) cx += prog.c[i] * sol.x[i];
        CHECK(cx == doctest::Approx(-1.0).epsilon(1e-9));
        const std::vector<double> ax = prog.a.apply(sol.x);
        for (double v : ax) CHECK(std::abs(v) <= 1e-8);
        for (double v : sol.x) CHECK(v >= -1e-9);
    }
}

TEST_CASE("100 random LPs with constructed optima") {
    std::mt19937_64 rng(1234);
    SolveSettings settings;
    settings.tol_gap = 1e-10;
    settings.tol_feas = 1e-10;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng() % 7);  // 4..10
        const std::size_t m = 1 + n / 2;
        RealMatrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = test_helpers::gauss(rng);
        // Strictly complementary primal/dual pair with disjoint supports.
        std::vector<double> x_star(n, 0.0), s_star(n, 0.0), y_star(m);
        const std::size_t support = n / 2;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = 0.5 + test_helpers::uniform01(rng);
            if (j < support)
                x_star[j] = v;
            else
                s_star[j] = v;
        }
        for (std::size_t i = 0; i < m; ++i) y_star[i] = test_helpers::gauss(rng);

        ConicProgram prog;
        prog.cone.blocks = {nonneg_block(n)};
        prog.a = a;
        prog.b = a.apply(x_star);
        prog.c = a.apply_transpose(y_star);
        for (std::size_t j = 0; j < n; ++j) prog.c[j] += s_star[j];

        double opt = 0.0;
        for (std::size_t j = 0; j < n; ++j) opt += prog.c[j] * x_star[j];

        const Solution sol = solve(prog, settings);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(std::abs(sol.primal_value - opt) <= 1e-7 * std::max(1.0, std::abs(opt)));
        // Weak duality.
        CHECK(sol.dual_value <= sol.primal_value + 1e-9);
        CHECK(verify_solution(prog, sol, 1e-7).pass);
    }
}

TEST_CASE("warm start reproduces the solved value") {
    std::mt19937_64 rng(31);
    const HermitianOperator z = test_helpers::random_hermitian(rng, 3);
    LambdaMaxProgram lm{z};
    const Solution first = solve(lm.prog);
    REQUIRE(first.status == SolveStatus::Optimal);

    SolveSettings warm;
    warm.warm_x = first.x;
    const Solution second = solve(lm.prog, warm);
    REQUIRE(second.status == SolveStatus::Optimal);
    CHECK(std::abs(second.primal_value - first.primal_value) <= 1e-8);
}

TEST_CASE("redundant consistent rows are dropped and recorded") {
    ProgramBuilder pb;
    const std::size_t xv = pb.add_nonneg_var(2);
    pb.add_objective_term(xv, 0, 1.0);
    const std::size_t c1 = pb.add_scalar_constraint(0.3);
    pb.add_scalar_term(c1, xv, 0, 1.0);
    const std::size_t c2 = pb.add_scalar_constraint(0.7);
    pb.add_scalar_term(c2, xv, 1, 1.0);
    const std::size_t c3 = pb.add_scalar_constraint(1.0);  // sum of the first two
    pb.add_scalar_term(c3, xv, 0, 1.0);
    pb.add_scalar_term(c3, xv, 1, 1.0);
    const ConicProgram prog = pb.build();

    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_value == doctest::Approx(0.3).epsilon(1e-8));
    REQUIRE(sol.dropped_rows.size() == 1);
    CHECK(sol.dropped_rows[0] == 2);
    CHECK(sol.y.size() == 3);
    CHECK(sol.y[2] == 0.0);
    CHECK(verify_solution(prog, sol, 1e-7).pass);
}

TEST_CASE("iteration cap reports MaxIterations, not an error") {
    std::mt19937_64 rng(8);
    const HermitianOperator z = test_helpers::random_hermitian(rng, 3);
    LambdaMaxProgram lm{z};
    SolveSettings strict;
    strict.max_iters = 1;
    const Solution sol = solve(lm.prog, strict);
    CHECK(sol.status == SolveStatus::MaxIterations);
    CHECK(sol.iterations == 1);
}

TEST_CASE("verify_solution flags constructed defects") {
    ProgramBuilder pb;
    const std::size_t xv = pb.add_nonneg_var(1);
    pb.add_objective_term(xv, 0, 1.0);
    const std::size_t cons = pb.add_scalar_constraint(1.0);
    pb.add_scalar_term(cons, xv, 0, 1.0);
    const ConicProgram prog = pb.build();
    const Solution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);

    SUBCASE("perturbed primal point") {
        Solution bent = sol;
        bent.x[0] += 1e-3;
        const VerifyReport rep = verify_solution(prog, bent, 1e-8);
        CHECK_FALSE(rep.pass);
        CHECK_FALSE(rep.primal_ok);
        CHECK(rep.primal_residual == doctest::Approx(1e-3 / 2.0).epsilon(1e-3));
    }
    SUBCASE("zeroed dual point") {
        Solution bent = sol;
        bent.y.assign(bent.y.size(), 0.0);
        bent.s = prog.c;  // what c - A^T y degrades to with y = 0
        const VerifyReport rep = verify_solution(prog, bent, 1e-8);
        CHECK(rep.dual_value == 0.0);
        CHECK(rep.gap == doctest::Approx(rep.primal_value));
        CHECK_FALSE(rep.gap_ok);
        CHECK_FALSE(rep.pass);
    }
}

TEST_CASE("program validation rejects malformed inputs") {
    ConicProgram empty;
    CHECK_THROWS_AS(solve(empty), DimensionError);

    ConicProgram bad;
    bad.cone.blocks = {nonneg_block(2)};
    bad.c = {1.0};  // wrong length
    bad.a = RealMatrix(0, 2);
    CHECK_THROWS_AS(solve(bad), DimensionError);

    ConicProgram nan_b;
    nan_b.cone.blocks = {nonneg_block(1)};
    nan_b.c = {1.0};
    nan_b.a = RealMatrix(1, 1);
    nan_b.a(0, 0) = 1.0;
    nan_b.b = {std::nan("")};
    CHECK_THROWS_AS(solve(nan_b), ValidationError);

    ProgramBuilder pb;
    const std::size_t xv = pb.add_nonneg_var(1);
    CHECK_THROWS_AS(pb.add_objective_term(xv, 3, 1.0), DimensionError);
    CHECK_THROWS_AS(pb.add_objective_term(xv, HermitianOperator::identity(2)), DimensionError);
    const std::size_t cons = pb.add_scalar_constraint(0.0);
    CHECK_THROWS_AS(pb.add_scalar_term(cons, xv, HermitianOperator::identity(2)), DimensionError);
    CHECK_THROWS_AS(pb.add_matrix_term(cons, xv, 1.0), DimensionError);
}

TEST_CASE("program debug dump is well-formed JSON") {
    std::mt19937_64 rng(55);
    LambdaMaxProgram lm{test_helpers::random_hermitian(rng, 2)};
    const std::string text = program_to_json(lm.prog);
    const nlohmann::json j = nlohmann::json::parse(text);
    REQUIRE(j.contains("blocks"));
    REQUIRE(j.contains("a"));
    CHECK(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["kind"] == "nonneg");
    CHECK(j["blocks"][1]["kind"] == "psd");
    CHECK(j["c"].size() == lm.prog.c.size());
    CHECK(j["a"].size() == lm.prog.a.rows());
    CHECK(j["a"][0].size() == lm.prog.a.cols());

    const std::string path = "conic_dump_roundtrip.json";
    dump_program(lm.prog, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    const nlohmann::json back = nlohmann::json::parse(in);
    CHECK(back == j);
    in.close();
    std::remove(path.c_str());
}
