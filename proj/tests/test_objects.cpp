#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "resgames/errors.hpp"
#include "resgames/objects.hpp"

using namespace resgames;
using test_helpers::pauli_x;
using test_helpers::pauli_z;

namespace {

HermitianOperator basis_state(std::size_t d, std::size_t i) {
    ComplexMatrix m(d, d);
    m(i, i) = 1.0;
    return HermitianOperator::trusted(std::move(m));
}

double herm_diff(const HermitianOperator& a, const HermitianOperator& b) {
    return max_abs_entry(a.matrix() - b.matrix());
}

std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) {
        v = test_helpers::uniform01(rng);
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

Strategy random_strategy(std::mt19937_64& rng, std::size_t nz, std::size_t nx, std::size_t ny,
                         std::size_t na, std::size_t nout) {
    std::vector<double> q = random_pmf(rng, nz);
    std::vector<double> r, s;
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z) {
            const std::vector<double> row = random_pmf(rng, nx);
            r.insert(r.end(), row.begin(), row.end());
        }
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z)
            for (std::size_t a = 0; a < na; ++a) {
                const std::vector<double> row = random_pmf(rng, nout);
                s.insert(s.end(), row.begin(), row.end());
            }
    return Strategy(nz, nx, ny, na, nout, std::move(q), std::move(r), std::move(s));
}

}  // namespace

TEST_CASE("state construction validates PSD and unit trace") {
    const State psi(basis_state(2, 0));
    CHECK(psi.dim() == 2);
    CHECK(psi.matrix()(0, 0) == cplx(1.0, 0.0));

    const State r = random_state(3, 42);
    CHECK(r.dim() == 3);
    CHECK(std::abs(trace(r.matrix().matrix()).real() - 1.0) <= 1e-12);
    CHECK(is_psd(r.matrix(), 1e-12));

    // trace 1 but indefinite
    CHECK_THROWS_AS(State(HermitianOperator::diagonal({1.5, -0.5})), ValidationError);
    // PSD but trace 2
    CHECK_THROWS_AS(State(HermitianOperator::identity(2)), ValidationError);
}

TEST_CASE("povm set construction validates effects and completeness") {
    const POVMSet sharp({{HermitianOperator::diagonal({1.0, 0.0}),
                          HermitianOperator::diagonal({0.0, 1.0})}});
    CHECK(sharp.settings() == 1);
    CHECK(sharp.outcomes() == 2);
    CHECK(sharp.dim() == 2);
    CHECK(sharp.effect(0, 0)(0, 0) == cplx(1.0, 0.0));
    CHECK_THROWS_AS(sharp.effect(2, 0), DimensionError);
    CHECK_THROWS_AS(sharp.effect(0, 1), DimensionError);

    // incomplete: sums to I/2
    CHECK_THROWS_AS(POVMSet({{HermitianOperator::diagonal({0.25, 0.25}),
                              HermitianOperator::diagonal({0.25, 0.25})}}),
                    ValidationError);
    // complete but one effect indefinite
    CHECK_THROWS_AS(POVMSet({{HermitianOperator::diagonal({1.5, -0.5}),
                              HermitianOperator::diagonal({-0.5, 1.5})}}),
                    ValidationError);
    // ragged outcome counts
    CHECK_THROWS_AS(POVMSet({{HermitianOperator::identity(2)},
                             {HermitianOperator::diagonal({1.0, 0.0}),
                              HermitianOperator::diagonal({0.0, 1.0})}}),
                    DimensionError);
    CHECK_THROWS_AS(POVMSet({}), DimensionError);
}

TEST_CASE("measure-prepare subchannels apply as tr[E rho] K") {
    const Subchannel half = Subchannel::measure_prepare(
        0.5 * HermitianOperator::identity(2), basis_state(2, 0));
    const State rho = random_state(2, 5);
    const HermitianOperator out = apply(half, rho);
    CHECK(herm_diff(out, 0.5 * basis_state(2, 0)) <= 1e-15);

    // orthogonal effect annihilates |0><0|
    const Subchannel ortho = Subchannel::measure_prepare(basis_state(2, 1),
                                                         0.5 * HermitianOperator::identity(2));
    CHECK(max_abs_entry(apply(ortho, State(basis_state(2, 0))).matrix()) <= 1e-15);

    // trace-increasing map rejected: norm(E) tr[K] = 1.2
    CHECK_THROWS_AS(Subchannel::measure_prepare(1.2 * basis_state(2, 0), basis_state(2, 0)),
                    ValidationError);
    // negative effect rejected
    CHECK_THROWS_AS(Subchannel::measure_prepare(HermitianOperator::diagonal({-0.1, 0.0}),
                                                basis_state(2, 0)),
                    ValidationError);
    CHECK_THROWS_AS(half.choi_matrix(), ValidationError);
    CHECK_THROWS_AS(apply(half, random_state(3, 1)), DimensionError);
}

TEST_CASE("choi subchannels: identity channel, validation, accessors") {
    const std::size_t d = 3;
    ComplexMatrix c(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) c(i * d + i, j * d + j) = 1.0;
    const Subchannel id = Subchannel::choi(HermitianOperator::trusted(c), d, d);
    CHECK(id.in_dim() == d);
    CHECK(id.out_dim() == d);

    const State rho = random_state(d, 11);
    CHECK(herm_diff(apply(id, rho), rho.matrix()) <= 1e-12);
    CHECK_THROWS_AS(id.effect(), ValidationError);
    CHECK_THROWS_AS(id.preparation(), ValidationError);

    // scaled identity channel increases trace
    CHECK_THROWS_AS(Subchannel::choi(HermitianOperator::trusted(1.5 * c), d, d),
                    ValidationError);
    // dimension must factor
    CHECK_THROWS_AS(Subchannel::choi(HermitianOperator::identity(9), 2, 4), DimensionError);
    // non-PSD Choi matrix
    CHECK_THROWS_AS(Subchannel::choi(HermitianOperator::diagonal({0.5, -0.1, 0.0, 0.0}), 2, 2),
                    ValidationError);
}

TEST_CASE("measure-prepare to Choi conversion preserves the map") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        const POVMSet p = random_povm_set(2, 1, 2, 100 + rep);
        const State k = random_state(2, 200 + rep);
        const Subchannel mp = Subchannel::measure_prepare(p.effect(0, 0), k.matrix());
        const Subchannel ch = mp.to_choi();
        CHECK(ch.kind() == Subchannel::Kind::Choi);
        const State rho = random_state(2, 300 + rep);
        CHECK(herm_diff(apply(mp, rho), apply(ch, rho)) <= 1e-12);
    }

    // rectangular map: qubit in, qutrit out
    const Subchannel rect =
        Subchannel::measure_prepare(basis_state(2, 1), random_state(3, 9).matrix());
    const Subchannel rect_choi = rect.to_choi();
    CHECK(rect_choi.in_dim() == 2);
    CHECK(rect_choi.out_dim() == 3);
    const State rho = random_state(2, 10);
    CHECK(herm_diff(apply(rect, rho), apply(rect_choi, rho)) <= 1e-12);
}

TEST_CASE("apply is linear in the state") {
    const State r1 = random_state(2, 21), r2 = random_state(2, 22);
    const double alpha = 0.3;
    const State mix(HermitianOperator::trusted(alpha * r1.matrix().matrix() +
                                               (1.0 - alpha) * r2.matrix().matrix()));
    const POVMSet p = random_povm_set(2, 1, 2, 23);
    const Subchannel mp = Subchannel::measure_prepare(p.effect(1, 0), random_state(2, 24).matrix());
    for (const Subchannel& sc : {mp, mp.to_choi()}) {
        const HermitianOperator lhs = apply(sc, mix);
        const HermitianOperator rhs = HermitianOperator::trusted(
            alpha * apply(sc, r1).matrix() + (1.0 - alpha) * apply(sc, r2).matrix());
        CHECK(herm_diff(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("instrument sets validate trace preservation") {
    const InstrumentSet inst = random_instrument_set(2, 2, 3, 31);
    CHECK(inst.settings() == 2);
    CHECK(inst.outcomes() == 3);
    CHECK(inst.in_dim() == 2);
    for (std::size_t y = 0; y < 2; ++y) {
        const State rho = random_state(2, 400 + y);
        double total = 0.0;
        for (std::size_t b = 0; b < 3; ++b)
            total += trace(apply(inst.subchannel(b, y), rho).matrix()).real();
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(inst.subchannel(3, 0), DimensionError);

    // a lone half-strength subchannel is not trace-preserving
    CHECK_THROWS_AS(InstrumentSet({{Subchannel::measure_prepare(
                        0.5 * HermitianOperator::identity(2), basis_state(2, 0))}}),
                    ValidationError);
    // mixed input dimensions
    CHECK_THROWS_AS(
        InstrumentSet({{Subchannel::measure_prepare(HermitianOperator::identity(2),
                                                    basis_state(2, 0)),
                        Subchannel::measure_prepare(HermitianOperator::zero(3),
                                                    basis_state(2, 0))}}),
        DimensionError);
}

TEST_CASE("game ensembles require a full-support normalized prior") {
    const InstrumentSet inst = random_instrument_set(2, 2, 2, 41);
    const GameEnsemble game({0.25, 0.75}, inst);
    CHECK(game.prior()[1] == 0.75);
    CHECK(game.instruments().settings() == 2);
    CHECK_THROWS_AS(GameEnsemble({1.0, 0.0}, inst), ValidationError);
    CHECK_THROWS_AS(GameEnsemble({0.7, 0.7}, inst), ValidationError);
    CHECK_THROWS_AS(GameEnsemble({1.0}, inst), DimensionError);
}

TEST_CASE("strategy validation") {
    // singleton everything
    const Strategy id(1, 1, 1, 1, 1, {1.0}, {1.0}, {1.0});
    CHECK(id.q(0) == 1.0);
    CHECK(id.r(0, 0, 0) == 1.0);
    // unnormalized r
    CHECK_THROWS_AS(Strategy(1, 2, 1, 1, 1, {1.0}, {0.5, 0.4}, {1.0}), ValidationError);
    // negative entry
    CHECK_THROWS_AS(Strategy(1, 2, 1, 1, 1, {1.0}, {1.5, -0.5}, {1.0}), ValidationError);
    // size mismatch
    CHECK_THROWS_AS(Strategy(1, 2, 1, 1, 1, {1.0}, {1.0}, {1.0}), DimensionError);
    CHECK_THROWS_AS(Strategy(0, 1, 1, 1, 1, {}, {}, {}), DimensionError);
}

TEST_CASE("simulate: identity and collapsing strategies") {
    const POVMSet m = random_povm_set(2, 2, 2, 51);

    // z singleton, r(x|y) = delta_{x,y}, s(b|a) = delta_{b,a}
    const Strategy ident = to_strategy({{0, 1}, {{0, 1}, {0, 1}}}, 2, 2, 2);
    const POVMSet n = simulate(m, ident, 2, 2);
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t b = 0; b < 2; ++b)
            CHECK(herm_diff(n.effect(b, y), m.effect(b, y)) <= 1e-14);

    // post-processing that dumps every outcome into the first one
    const Strategy collapse = to_strategy({{0, 1}, {{0, 0}, {0, 0}}}, 2, 2, 2);
    const POVMSet flat = simulate(m, collapse, 2, 2);
    for (std::size_t y = 0; y < 2; ++y) {
        CHECK(herm_diff(flat.effect(0, y), HermitianOperator::identity(2)) <= 1e-12);
        CHECK(max_abs_entry(flat.effect(1, y).matrix()) <= 1e-12);
    }

    // range mismatches
    std::mt19937_64 rng(5);
    CHECK_THROWS_AS(simulate(m, random_strategy(rng, 2, 3, 2, 2, 2), 2, 2), DimensionError);
    CHECK_THROWS_AS(simulate(m, random_strategy(rng, 2, 2, 2, 2, 2), 3, 2), DimensionError);
}

TEST_CASE("simulate matches a direct triple-sum evaluation") {
    std::mt19937_64 rng(61);
    const POVMSet m = random_povm_set(3, 2, 3, 62);
    const Strategy strat = random_strategy(rng, 3, 2, 2, 3, 4);
    const POVMSet n = simulate(m, strat, 2, 4);
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t b = 0; b < 4; ++b) {
            ComplexMatrix expect(3, 3);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t x = 0; x < 2; ++x)
                    for (std::size_t z = 0; z < 3; ++z)
                        expect = expect + (strat.s(b, a, y, z) * strat.r(x, y, z) *
                                           strat.q(z)) *
                                              m.effect(a, x).matrix();
            CHECK(max_abs_entry(n.effect(b, y).matrix() - expect) <= 1e-12);
        }
}

TEST_CASE("simulate composes across two stages") {
    std::mt19937_64 rng(71);
    const POVMSet m = random_povm_set(2, 2, 2, 72);
    const Strategy s1 = random_strategy(rng, 2, 2, 2, 2, 2);  // M (2x2) -> N (2x2)
    const Strategy s2 = random_strategy(rng, 2, 2, 2, 2, 2);  // N (2x2) -> O (2x2)
    const POVMSet n = simulate(m, s1, 2, 2);
    const POVMSet o = simulate(n, s2, 2, 2);

    // Composite hidden variable: (z1, z2, y-function w -> y), where the
    // y-function carries the intermediate input choice for every final
    // setting w.
    const std::size_t nz1 = 2, nz2 = 2, ny = 2, nw = 2, nfun = 4;  // ny^nw
    const std::size_t nz = nz1 * nz2 * nfun;
    std::vector<double> q(nz), r(nw * nz * 2, 0.0), s(nw * nz * 2 * 2, 0.0);
    for (std::size_t z1 = 0; z1 < nz1; ++z1)
        for (std::size_t z2 = 0; z2 < nz2; ++z2)
            for (std::size_t f = 0; f < nfun; ++f) {
                const std::size_t z = (z1 * nz2 + z2) * nfun + f;
                const std::size_t yw[2] = {f / ny, f % ny};
                double w = s1.q(z1) * s2.q(z2);
                for (std::size_t ww = 0; ww < nw; ++ww) w *= s2.r(yw[ww], ww, z2);
                q[z] = w;
                for (std::size_t ww = 0; ww < nw; ++ww) {
                    for (std::size_t x = 0; x < 2; ++x)
                        r[(ww * nz + z) * 2 + x] = s1.r(x, yw[ww], z1);
                    for (std::size_t a = 0; a < 2; ++a)
                        for (std::size_t cc = 0; cc < 2; ++cc) {
                            double acc = 0.0;
                            for (std::size_t b = 0; b < 2; ++b)
                                acc += s1.s(b, a, yw[ww], z1) * s2.s(cc, b, ww, z2);
                            s[((ww * nz + z) * 2 + a) * 2 + cc] = acc;
                        }
                }
            }
    const Strategy composed(nz, 2, nw, 2, 2, std::move(q), std::move(r), std::move(s));
    const POVMSet direct = simulate(m, composed, 2, 2);
    for (std::size_t w = 0; w < 2; ++w)
        for (std::size_t cc = 0; cc < 2; ++cc)
            CHECK(herm_diff(direct.effect(cc, w), o.effect(cc, w)) <= 1e-10);
}

TEST_CASE("merge_tail_outcomes") {
    const POVMSet five = random_povm_set(3, 1, 5, 81);

    // J = 0: identity
    const POVMSet same = merge_tail_outcomes(five, 5);
    for (std::size_t a = 0; a < 5; ++a)
        CHECK(herm_diff(same.effect(a, 0), five.effect(a, 0)) <= 1e-15);

    // merge down to 3 outcomes
    const POVMSet three = merge_tail_outcomes(five, 3);
    CHECK(three.outcomes() == 3);
    for (std::size_t a = 0; a < 2; ++a)
        CHECK(herm_diff(three.effect(a, 0), five.effect(a, 0)) <= 1e-15);
    const HermitianOperator tail =
        five.effect(2, 0) + five.effect(3, 0) + five.effect(4, 0);
    CHECK(herm_diff(three.effect(2, 0), tail) <= 1e-14);

    // two-outcome set merged to a single trivial outcome
    const POVMSet pair({{HermitianOperator::diagonal({0.3, 0.6}),
                         HermitianOperator::diagonal({0.7, 0.4})}});
    const POVMSet trivial = merge_tail_outcomes(pair, 1);
    CHECK(trivial.outcomes() == 1);
    CHECK(herm_diff(trivial.effect(0, 0), HermitianOperator::identity(2)) <= 1e-15);

    CHECK_THROWS_AS(merge_tail_outcomes(five, 6), DimensionError);
    CHECK_THROWS_AS(merge_tail_outcomes(five, 0), DimensionError);
}

TEST_CASE("noisy MUB pair") {
    const POVMSet off = noisy_mub_pair(0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a)
            CHECK(herm_diff(off.effect(a, x), 0.5 * HermitianOperator::identity(2)) <= 1e-15);

    const POVMSet sharp = noisy_mub_pair(1.0);
    CHECK(herm_diff(sharp.effect(0, 0),
                    HermitianOperator::trusted(0.5 * (ComplexMatrix::identity(2) + pauli_z())))
          <= 1e-15);
    CHECK(herm_diff(sharp.effect(1, 1),
                    HermitianOperator::trusted(0.5 * (ComplexMatrix::identity(2) - pauli_x())))
          <= 1e-15);

    const POVMSet mid = noisy_mub_pair(0.7);
    CHECK(mid.effect(0, 0)(0, 0).real() == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(mid.effect(0, 1)(0, 1).real() == doctest::Approx(0.35).epsilon(1e-12));

    CHECK_THROWS_AS(noisy_mub_pair(-0.1), ValidationError);
    CHECK_THROWS_AS(noisy_mub_pair(1.1), ValidationError);
}

TEST_CASE("random objects are deterministic per seed and satisfy invariants") {
    CHECK(herm_diff(random_state(2, 7).matrix(), random_state(2, 7).matrix()) == 0.0);
    CHECK(herm_diff(random_state(2, 7).matrix(), random_state(2, 8).matrix()) > 1e-3);

    const POVMSet p1 = random_povm_set(2, 2, 2, 1);
    const POVMSet p2 = random_povm_set(2, 2, 2, 1);
    for (std::size_t x = 0; x < 2; ++x) {
        HermitianOperator sum = HermitianOperator::zero(2);
        for (std::size_t a = 0; a < 2; ++a) {
            CHECK(herm_diff(p1.effect(a, x), p2.effect(a, x)) == 0.0);
            sum = sum + p1.effect(a, x);
        }
        CHECK(herm_diff(sum, HermitianOperator::identity(2)) <= 1e-9);
    }

    const InstrumentSet i1 = random_instrument_set(2, 1, 2, 3);
    const InstrumentSet i2 = random_instrument_set(2, 1, 2, 3);
    for (std::size_t b = 0; b < 2; ++b) {
        CHECK(herm_diff(i1.subchannel(b, 0).effect(), i2.subchannel(b, 0).effect()) == 0.0);
        CHECK(herm_diff(i1.subchannel(b, 0).preparation(),
                        i2.subchannel(b, 0).preparation()) == 0.0);
    }
}
