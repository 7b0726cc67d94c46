#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "resgames/errors.hpp"
#include "resgames/games.hpp"
#include "resgames/gpt.hpp"
#include "resgames/linalg.hpp"
#include "resgames/objects.hpp"
#include "resgames/resources.hpp"

using namespace resgames;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> scaled(double c, const std::vector<double>& v) {
    std::vector<double> out(v);
    for (double& x : out) x *= c;
    return out;
}

// True when some generator row matches the direction of `want` (both unit
// vectors) to 1e-9.
bool has_direction(const std::vector<std::vector<double>>& rays, std::vector<double> want) {
    const double nm = std::sqrt(dot(want, want));
    for (double& x : want) x /= nm;
    for (const std::vector<double>& r : rays)
        if (dot(r, want) > 1.0 - 1e-9) return true;
    return false;
}

// The square-state-space ("gbit") fixture shared by most cases: one vertex
// as the resourceful state, the barycenter as the only free state, and the
// pair of sharp coordinate readouts as the resourceful measurement set.
struct SquareFixture {
    GPTModel model = GPTModel::gbit();
    GPTState vertex{model, {1.0, 1.0, 1.0}};
    GPTState center{model, model.barycenter()};
    GPTFreeStateSet free_center = GPTFreeStateSet::polytope({model.barycenter()});
    GPTFreeMeasurementFamily ff = GPTFreeMeasurementFamily::compatible();
    std::vector<double> p_x = {0.5, 0.5};

    // Both coordinate readouts, depolarized by 1 - t.
    GPTMeasurementSet coordinate_pair(double t) const {
        const std::vector<std::vector<std::vector<double>>> eff = {
            {{0.5 * t, 0.0, 0.5}, {-0.5 * t, 0.0, 0.5}},
            {{0.0, 0.5 * t, 0.5}, {0.0, -0.5 * t, 0.5}}};
        return GPTMeasurementSet(model, eff);
    }
};

// Joint enumeration of every deterministic strategy, written directly from
// the game definition (input choice per setting, branch guess per
// outcome/setting pair), as an independent check of the per-setting scan.
double strategy_scan_value(const GPTModel& model, const GPTGameEnsemble& game,
                           const GPTState& omega, const GPTMeasurementSet& e, bool maximize) {
    const GPTInstrumentSet& inst = game.instruments();
    const std::size_t tau = inst.settings();
    const std::size_t stored = inst.outcomes();
    const std::size_t kappa = e.settings();
    const std::size_t l = e.outcomes();
    std::vector<std::vector<std::vector<double>>> table(
        tau, std::vector<std::vector<double>>(stored));
    for (std::size_t y = 0; y < tau; ++y)
        for (std::size_t b = 0; b < stored; ++b) {
            const std::vector<double> out = inst.subchannel(b, y).apply(omega.vector());
            table[y][b].resize(kappa * l);
            const bool tail = game.tail_multiplicity() > 1 && b + 1 == stored;
            for (std::size_t x = 0; x < kappa; ++x)
                for (std::size_t a = 0; a < l; ++a)
                    table[y][b][x * l + a] =
                        dot(e.effect(a, x), out) /
                        (tail ? static_cast<double>(game.tail_multiplicity()) : 1.0);
        }
    std::size_t count_x = 1, count_g = 1;
    for (std::size_t y = 0; y < tau; ++y) count_x *= kappa;
    for (std::size_t k = 0; k < l * tau; ++k) count_g *= stored;
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (std::size_t xs = 0; xs < count_x; ++xs)
        for (std::size_t gs = 0; gs < count_g; ++gs) {
            double total = 0.0;
            std::size_t xrem = xs;
            for (std::size_t y = 0; y < tau; ++y) {
                const std::size_t x = xrem % kappa;
                xrem /= kappa;
                std::size_t grem = gs;
                for (std::size_t skip = 0; skip < y * l; ++skip) grem /= stored;
                double sum = 0.0;
                for (std::size_t a = 0; a < l; ++a) {
                    const std::size_t b = grem % stored;
                    grem /= stored;
                    sum += table[y][b][x * l + a];
                }
                total += game.prior()[y] * sum;
            }
            if (maximize ? total > best : total < best) best = total;
        }
    return best;
}

// Extreme points of the two-outcome parent polytope on the square model:
// g0 ranges over {p : p and u - p both in the dual cone}, whose corners are
// the zero functional, the unit, and the four half-sharp effects.
double two_parent_oracle(const std::vector<double>& w0, const std::vector<double>& w1,
                         bool maximize) {
    static const std::vector<std::vector<double>> corners = {
        {0.0, 0.0, 0.0},  {0.0, 0.0, 1.0},   {0.5, 0.0, 0.5},
        {-0.5, 0.0, 0.5}, {0.0, 0.5, 0.5},   {0.0, -0.5, 0.5}};
    const std::vector<double> u = {0.0, 0.0, 1.0};
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (const std::vector<double>& p : corners) {
        double v = dot(p, w0);
        for (std::size_t r = 0; r < 3; ++r) v += (u[r] - p[r]) * w1[r];
        if (maximize ? v > best : v < best) best = v;
    }
    return best;
}

HermitianOperator diag2(double a, double b) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return HermitianOperator::trusted(std::move(m));
}

}  // namespace

TEST_CASE("square model: construction, membership, and validation") {
    const GPTModel model = GPTModel::gbit();
    CHECK(model.dim() == 3);
    CHECK(model.num_vertices() == 4);
    for (const std::vector<double>& v : model.vertices()) {
        CHECK(model.contains(v));
        CHECK(std::abs(dot(model.unit(), v) - 1.0) <= 1e-15);
    }
    const std::vector<double> bary = model.barycenter();
    CHECK(std::abs(bary[0]) <= 1e-15);
    CHECK(std::abs(bary[1]) <= 1e-15);
    CHECK(std::abs(bary[2] - 1.0) <= 1e-15);
    CHECK(model.contains(bary));
    CHECK_FALSE(model.contains({1.5, 0.0, 1.0}));

    CHECK_THROWS_AS(GPTModel(0, {{1.0}}, {1.0}), DimensionError);
    CHECK_THROWS_AS(GPTModel(3, {}, {0.0, 0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(GPTModel(3, {{1.0, 1.0}}, {0.0, 0.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(GPTModel(3, {{1.0, 1.0, 1.0}}, {0.0, 1.0}), DimensionError);
    // Vertex pairing off the unit level set.
    CHECK_THROWS_AS(GPTModel(3, {{1.0, 1.0, 2.0}, {1.0, -1.0, 1.0}, {-1.0, 0.0, 1.0}},
                             {0.0, 0.0, 1.0}),
                    ValidationError);
    // Vertices confined to a plane through the origin cannot span.
    CHECK_THROWS_AS(GPTModel(3, {{1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, {0.0, 0.0, 1.0}},
                             {0.0, 0.0, 1.0}),
                    ValidationError);
    // Vertex budget.
    std::vector<std::vector<double>> many;
    for (int i = 0; i < 65; ++i) {
        const double th = 6.283185307179586 * static_cast<double>(i) / 65.0;
        many.push_back({std::cos(th), std::sin(th), 1.0});
    }
    CHECK_THROWS_AS(GPTModel(3, many, {0.0, 0.0, 1.0}), EnumerationCapError);
}

TEST_CASE("dual cone generators: square, octahedron, cube, and self-duality") {
    const GPTModel square = GPTModel::gbit();
    const auto& sq = square.dual_generators();
    REQUIRE(sq.size() == 4);
    CHECK(has_direction(sq, {1.0, 0.0, 1.0}));
    CHECK(has_direction(sq, {-1.0, 0.0, 1.0}));
    CHECK(has_direction(sq, {0.0, 1.0, 1.0}));
    CHECK(has_direction(sq, {0.0, -1.0, 1.0}));

    const GPTModel oct = GPTModel::qubit_octahedron();
    const auto& oc = oct.dual_generators();
    REQUIRE(oc.size() == 8);
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0})
            for (double s3 : {-1.0, 1.0}) CHECK(has_direction(oc, {1.0, s1, s2, s3}));

    // Cube state space: dual cone generated by the six facet normals.
    std::vector<std::vector<double>> cube_vertices;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0})
            for (double s3 : {-1.0, 1.0}) cube_vertices.push_back({s1, s2, s3, 1.0});
    const GPTModel cube(4, cube_vertices, {0.0, 0.0, 0.0, 1.0});
    const auto& cb = cube.dual_generators();
    REQUIRE(cb.size() == 6);
    CHECK(has_direction(cb, {1.0, 0.0, 0.0, 1.0}));
    CHECK(has_direction(cb, {-1.0, 0.0, 0.0, 1.0}));
    CHECK(has_direction(cb, {0.0, 1.0, 0.0, 1.0}));
    CHECK(has_direction(cb, {0.0, -1.0, 0.0, 1.0}));
    CHECK(has_direction(cb, {0.0, 0.0, 1.0, 1.0}));
    CHECK(has_direction(cb, {0.0, 0.0, -1.0, 1.0}));

    // Taking the square's dual generators as vertices of a new model must
    // recover the original vertex directions as the new dual cone.
    const GPTModel diamond(
        3, {{1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, {0.0, -1.0, 1.0}},
        {0.0, 0.0, 1.0});
    const auto& dm = diamond.dual_generators();
    REQUIRE(dm.size() == 4);
    CHECK(has_direction(dm, {1.0, 1.0, 1.0}));
    CHECK(has_direction(dm, {1.0, -1.0, 1.0}));
    CHECK(has_direction(dm, {-1.0, 1.0, 1.0}));
    CHECK(has_direction(dm, {-1.0, -1.0, 1.0}));

    // Every generator pairs nonnegatively with every vertex of its model.
    for (const auto* m : {&square, &oct, &cube, &diamond})
        for (const auto& d : m->dual_generators())
            for (const auto& v : m->vertices()) CHECK(dot(d, v) >= -1e-12);
}

TEST_CASE("order-unit norm: pins and the bound on state pairings") {
    const GPTModel model = GPTModel::gbit();
    CHECK(std::abs(order_unit_norm(model, {0.0, 0.0, 1.0}) - 1.0) <= 1e-15);
    CHECK(order_unit_norm(model, {0.0, 0.0, 0.0}) <= 1e-15);
    CHECK(std::abs(order_unit_norm(model, {1.0, 0.0, 0.0}) - 1.0) <= 1e-15);
    CHECK(std::abs(order_unit_norm(model, {0.5, 0.5, 1.0}) - 2.0) <= 1e-15);
    CHECK_THROWS_AS(order_unit_norm(model, {1.0, 0.0}), DimensionError);

    std::mt19937_64 rng(411);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> z(3);
        for (double& c : z) c = test_helpers::gauss(rng);
        const GPTState omega = gpt_random_state(model, rng());
        CHECK(std::abs(dot(z, omega.vector())) <= order_unit_norm(model, z) + 1e-12);
    }
}

TEST_CASE("states and effects: vertex checks suffice for the whole polytope") {
    const GPTModel model = GPTModel::gbit();
    for (const std::vector<double>& v : model.vertices()) CHECK_NOTHROW(GPTState(model, v));
    CHECK_NOTHROW(GPTEffect(model, {0.5, 0.0, 0.5}));
    CHECK_THROWS_AS(GPTState(model, {1.5, 1.5, 1.0}), ValidationError);
    CHECK_THROWS_AS(GPTState(model, {0.0, 0.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(GPTState(model, {0.0, 0.0}), DimensionError);
    CHECK_THROWS_AS(GPTEffect(model, {1.5, 0.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(GPTEffect(model, {0.5, 0.5}), DimensionError);

    // An effect validated on vertices stays within [0, 1] on every state:
    // 100 random effects against 100 random states.
    std::vector<std::vector<double>> effects;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const GPTMeasurementSet mset = gpt_random_measurement_set(model, 2, 2, 1000 + s);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t a = 0; a < 2; ++a) effects.push_back(mset.effect(a, x));
    }
    REQUIRE(effects.size() == 100);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const GPTState omega = gpt_random_state(model, 5000 + s);
        for (const std::vector<double>& e : effects) {
            const double p = dot(e, omega.vector());
            CHECK(p >= -1e-9);
            CHECK(p <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("measurement sets, subchannels, instruments: validation rules") {
    const GPTModel model = GPTModel::gbit();
    // Completeness is enforced tightly.
    CHECK_THROWS_AS(GPTMeasurementSet(model, {{{0.5, 0.0, 0.5}, {-0.5, 0.0, 0.49}}}),
                    ValidationError);
    CHECK_THROWS_AS(GPTMeasurementSet(model, {{}}), DimensionError);
    CHECK_THROWS_AS(
        GPTMeasurementSet(model, {{{0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}}, {{0.0, 0.0, 1.0}}}),
        DimensionError);

    // A map sending a vertex outside the cone, or inflating the unit, fails.
    CHECK_NOTHROW(GPTSubchannel::matrix(model, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    CHECK_THROWS_AS(GPTSubchannel::matrix(model, {2, 0, 0, 0, 1, 0, 0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(GPTSubchannel::matrix(model, {1, 0, 0, 0, 1, 0, 0, 0, 1.5}), ValidationError);
    CHECK_THROWS_AS(GPTSubchannel::matrix(model, {1, 0, 0, 0}), DimensionError);
    CHECK_NOTHROW(
        GPTSubchannel::measure_prepare(model, {0.5, 0.0, 0.5}, {1.0, 1.0, 1.0}));
    CHECK_THROWS_AS(
        GPTSubchannel::measure_prepare(model, {0.5, 0.0, 0.5}, {3.0, 0.0, 3.0}),
        ValidationError);

    // Instrument settings must form channels.
    const GPTSubchannel half =
        GPTSubchannel::measure_prepare(model, {0.0, 0.0, 0.5}, {0.0, 0.0, 1.0});
    CHECK_NOTHROW(GPTInstrumentSet(model, {{half, half}}));
    CHECK_THROWS_AS(GPTInstrumentSet(model, {{half}}), ValidationError);
    CHECK_THROWS_AS(GPTInstrumentSet(model, {{half, half}, {half}}), DimensionError);
    CHECK_THROWS_AS(GPTInstrumentSet(model, {}), DimensionError);

    // Ensemble priors and tail multiplicity.
    const GPTInstrumentSet inst(model, {{half, half}});
    CHECK_THROWS_AS(GPTGameEnsemble({0.5, 0.5}, inst), DimensionError);
    CHECK_THROWS_AS(GPTGameEnsemble({0.7}, inst), ValidationError);
    CHECK_THROWS_AS(GPTGameEnsemble({1.0}, inst, 0), ValidationError);
    const GPTGameEnsemble game({1.0}, inst, 5);
    CHECK(game.logical_outcomes() == 6);
}

TEST_CASE("game evaluation agrees with the joint strategy scan") {
    const GPTModel model = GPTModel::gbit();
    std::mt19937_64 rng(7321);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t tail = rep % 2 == 0 ? 1 : 4;
        const GPTInstrumentSet inst = gpt_random_instrument_set(model, 2, 3, rng());
        std::vector<double> prior = {0.0, 0.0};
        prior[0] = 0.25 + 0.5 * test_helpers::uniform01(rng);
        prior[1] = 1.0 - prior[0];
        const GPTGameEnsemble game(prior, inst, tail);
        const GPTState omega = gpt_random_state(model, rng());
        const GPTMeasurementSet e = gpt_random_measurement_set(model, 2, 3, rng());

        const GameValue succ = gpt_succ_probability(game, omega, e);
        const GameValue err = gpt_err_probability(game, omega, e);
        CHECK(std::abs(succ.value - strategy_scan_value(model, game, omega, e, true)) <= 1e-12);
        CHECK(std::abs(err.value - strategy_scan_value(model, game, omega, e, false)) <= 1e-12);

        // The reported decomposition reassembles to the reported value.
        double total = 0.0;
        for (std::size_t y = 0; y < 2; ++y) total += prior[y] * succ.per_setting_values[y];
        CHECK(std::abs(total - succ.value) <= 1e-15);
        CHECK(succ.optimal_strategy.x_of_y.size() == 2);
        CHECK(succ.optimal_strategy.g_of_ay.size() == 2);
    }

    // Identity dynamics answered by the trivial measurement always succeed.
    const GPTSubchannel id = GPTSubchannel::matrix(model, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const GPTGameEnsemble idgame({1.0}, GPTInstrumentSet(model, {{id}}));
    const GPTMeasurementSet trivial(model, {{{0.0, 0.0, 1.0}}});
    const GPTState omega = gpt_random_state(model, 99);
    CHECK(std::abs(gpt_succ_probability(idgame, omega, trivial).value - 1.0) <= 1e-12);
    CHECK_THROWS_AS(gpt_err_probability(idgame, omega, trivial), ValidationError);
}

TEST_CASE("compatible pairing bound matches the parent polytope corners") {
    const GPTModel model = GPTModel::gbit();
    std::mt19937_64 rng(9151);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> w0(3), w1(3);
        for (double& c : w0) c = test_helpers::gauss(rng);
        for (double& c : w1) c = test_helpers::gauss(rng);
        const double up = gpt_compatible_pairing_bound(model, {w0, w1}, true);
        const double dn = gpt_compatible_pairing_bound(model, {w0, w1}, false);
        CHECK(std::abs(up - two_parent_oracle(w0, w1, true)) <= 1e-8);
        CHECK(std::abs(dn - two_parent_oracle(w0, w1, false)) <= 1e-8);
        CHECK(up >= dn - 1e-12);
    }
    CHECK_THROWS_AS(gpt_compatible_pairing_bound(model, {}, true), ValidationError);
    CHECK_THROWS_AS(gpt_compatible_pairing_bound(model, {{1.0, 0.0}}, true), DimensionError);
}

TEST_CASE("state quantifiers on the square: pins, witnesses, duality") {
    const SquareFixture fx;

    const auto r0 = gpt_robustness_state(fx.model, fx.center, fx.free_center);
    CHECK(std::abs(r0.value) <= 1e-7);
    CHECK(std::abs(r0.primal_value - r0.dual_value) <= 1e-8);
    const auto w0 = gpt_weight_state(fx.model, fx.center, fx.free_center);
    CHECK(std::abs(w0.value) <= 1e-7);
    CHECK(std::abs(w0.primal_value - w0.dual_value) <= 1e-8);

    const auto r1 = gpt_robustness_state(fx.model, fx.vertex, fx.free_center);
    CHECK(std::abs(r1.value - 1.0) <= 1e-7);
    CHECK(std::abs(r1.primal_value - r1.dual_value) <= 1e-8);
    // Certifying decomposition: vertex + 1 * opposite vertex = 2 * center.
    for (std::size_t r = 0; r < 3; ++r) {
        const double mixed = fx.vertex.vector()[r] + std::vector<double>{-1.0, -1.0, 1.0}[r];
        CHECK(std::abs(mixed - 2.0 * fx.center.vector()[r]) <= 1e-15);
    }
    // Witness: inside the effect cone, free value exactly 1, resource value
    // 1 + robustness.
    for (const std::vector<double>& v : fx.model.vertices())
        CHECK(dot(r1.witness, v) >= -1e-7);
    CHECK(std::abs(dot(r1.witness, fx.center.vector()) - 1.0) <= 1e-7);
    CHECK(std::abs(dot(r1.witness, fx.vertex.vector()) - (1.0 + r1.value)) <= 1e-6);

    const auto w1 = gpt_weight_state(fx.model, fx.vertex, fx.free_center);
    CHECK(std::abs(w1.value - 1.0) <= 1e-7);
    CHECK(std::abs(w1.primal_value - w1.dual_value) <= 1e-8);
    for (const std::vector<double>& v : fx.model.vertices())
        CHECK(dot(w1.witness, v) >= -1e-7);
    CHECK(std::abs(dot(w1.witness, fx.center.vector()) - 1.0) <= 1e-7);
    CHECK(std::abs(dot(w1.witness, fx.vertex.vector()) - (1.0 - w1.value)) <= 1e-6);

    // Richer free polytope: opposite edge midpoints admit the vertex's edge
    // neighbours but not the vertex itself.
    const GPTFreeStateSet edge =
        GPTFreeStateSet::polytope({{1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}});
    const auto redge = gpt_robustness_state(fx.model, fx.vertex, edge);
    CHECK(redge.value > 0.5);
    CHECK(std::abs(redge.primal_value - redge.dual_value) <= 1e-8);
    const GPTState on_edge(fx.model, {0.3, 0.0, 1.0});
    CHECK(std::abs(gpt_robustness_state(fx.model, on_edge, edge).value) <= 1e-7);

    CHECK_THROWS_AS(gpt_robustness_state(fx.model, fx.vertex, GPTFreeStateSet::polytope({})),
                    ValidationError);
    CHECK_THROWS_AS(
        gpt_robustness_state(fx.model, fx.vertex, GPTFreeStateSet::polytope({{1.0, 0.0}})),
        DimensionError);
    CHECK_THROWS_AS(gpt_robustness_state(fx.model, fx.vertex,
                                         GPTFreeStateSet::polytope({{0.0, 0.0, -1.0}})),
                    ValidationError);
    CHECK_THROWS_AS(gpt_robustness_state(fx.model, fx.vertex,
                                         GPTFreeStateSet::polytope({{0.0, 0.0, 0.0}})),
                    ValidationError);
}

TEST_CASE("measurement-set quantifiers: noise family pins and witnesses") {
    const SquareFixture fx;

    // Depolarizing the sharp pair: robustness (2t-1)/3 and weight 2t-1 above
    // the compatibility threshold t = 1/2.
    const auto r_full = gpt_robustness_mset(fx.model, fx.coordinate_pair(1.0), fx.ff);
    CHECK(std::abs(r_full.value - 1.0 / 3.0) <= 1e-7);
    CHECK(std::abs(r_full.primal_value - r_full.dual_value) <= 1e-8);
    const auto r_mid = gpt_robustness_mset(fx.model, fx.coordinate_pair(0.75), fx.ff);
    CHECK(std::abs(r_mid.value - 1.0 / 6.0) <= 1e-7);
    const auto r_low = gpt_robustness_mset(fx.model, fx.coordinate_pair(0.5), fx.ff);
    CHECK(std::abs(r_low.value) <= 1e-7);

    const auto w_full = gpt_weight_mset(fx.model, fx.coordinate_pair(1.0), fx.ff);
    CHECK(std::abs(w_full.value - 1.0) <= 1e-7);
    CHECK(std::abs(w_full.primal_value - w_full.dual_value) <= 1e-8);
    const auto w_mid = gpt_weight_mset(fx.model, fx.coordinate_pair(0.75), fx.ff);
    CHECK(std::abs(w_mid.value - 0.5) <= 1e-7);
    const auto w_low = gpt_weight_mset(fx.model, fx.coordinate_pair(0.5), fx.ff);
    CHECK(std::abs(w_low.value) <= 1e-7);

    // A repeated readout is trivially realizable by one parent.
    const std::vector<std::vector<std::vector<double>>> twice = {
        {{0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}}, {{0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}}};
    const GPTMeasurementSet same(fx.model, twice);
    CHECK(std::abs(gpt_robustness_mset(fx.model, same, fx.ff).value) <= 1e-7);
    CHECK(std::abs(gpt_weight_mset(fx.model, same, fx.ff).value) <= 1e-7);

    // Witness sets: state-cone members whose extremal compatible pairing is
    // exactly 1 and whose resource pairing reproduces the quantifier.
    const GPTMeasurementSet sharp = fx.coordinate_pair(1.0);
    for (const auto& res : {r_full, w_full}) {
        std::vector<std::vector<double>> omegas(4, std::vector<double>(3, 0.0));
        double paired = 0.0;
        const CompatibilityModel cm(2, 2);
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t a = 0; a < 2; ++a) {
                CHECK(fx.model.contains(res.witness_set[x][a], 1e-7));
                paired += dot(sharp.effect(a, x), res.witness_set[x][a]);
                for (std::size_t lam = 0; lam < 4; ++lam)
                    if (cm.response(lam, x) == a)
                        for (std::size_t r = 0; r < 3; ++r)
                            omegas[lam][r] += res.witness_set[x][a][r];
            }
        const bool is_rob = res.kind == QuantifierKind::RobustnessPOVMSet;
        const double extremal = gpt_compatible_pairing_bound(fx.model, omegas, is_rob);
        CHECK(std::abs(extremal - 1.0) <= 1e-6);
        const double expected = is_rob ? 1.0 + res.value : 1.0 - res.value;
        CHECK(std::abs(paired - expected) <= 1e-6);
    }

    CHECK_THROWS_AS(
        gpt_robustness_mset(GPTModel::qubit_octahedron(), fx.coordinate_pair(1.0), fx.ff),
        DimensionError);
}

TEST_CASE("sharp pair robustness agrees with the symmetric-parent bisection") {
    const SquareFixture fx;
    // Under the symmetry of the coordinate pair, parents can be averaged to
    // the form ((a s, b s, (1+r)/4))_{ab}, so feasibility at mixing level r
    // reduces to fitting s between the marginal and positivity constraints.
    const auto feasible = [](double r) {
        const double s_max = (1.0 + r) / 8.0;
        const double s_need = (0.5 - r / 2.0) / 2.0;  // |2s - 1/2| <= r/2
        return s_need <= s_max + 1e-15;
    };
    double lo = 0.0, hi = 1.0;
    REQUIRE(feasible(hi));
    REQUIRE_FALSE(feasible(lo));
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    const auto lp = gpt_robustness_mset(fx.model, fx.coordinate_pair(1.0), fx.ff);
    CHECK(std::abs(lp.value - hi) <= 1e-7);
}

TEST_CASE("discrimination game construction on the square") {
    const SquareFixture fx;
    const GPTMeasurementSet sharp = fx.coordinate_pair(1.0);
    const std::size_t j = 10000;

    auto [game, cert] = build_gpt_disc_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                            fx.p_x, j);
    CHECK(std::abs(cert.alpha - 3.0 / 16.0) <= 1e-9);
    CHECK(cert.j == j);
    CHECK(std::abs(cert.state_robustness - 1.0) <= 1e-7);
    CHECK(std::abs(cert.set_robustness - 1.0 / 3.0) <= 1e-7);
    CHECK(game.tail_multiplicity() == j);
    CHECK(game.instruments().outcomes() == 3);

    // Resourceful pair meets the product of robustness factors exactly.
    const double succ = gpt_succ_probability(game, fx.vertex, sharp).value;
    const double target = (1.0 + cert.state_robustness) * (1.0 + cert.set_robustness);
    CHECK(std::abs(succ - 0.5) <= 1e-7);
    CHECK(succ >= cert.alpha * target - 1e-7);

    // Free pairs never beat alpha + 1/j; the best free response attains
    // alpha itself.
    const auto pairs = gpt_sample_free_pairs(fx.model, fx.free_center, fx.ff, 2, 2, 40, 2024);
    for (const auto& [sigma, mset] : pairs) {
        const double v = gpt_succ_probability(game, sigma, mset).value;
        CHECK(v <= cert.alpha + 1.0 / static_cast<double>(j) + 1e-9);
    }
    const double best_free = gpt_best_free_response(fx.model, game, fx.free_center, fx.ff, 2, 2,
                                                    true);
    CHECK(std::abs(best_free - cert.alpha) <= 1e-8);

    // Default garbage state is the barycenter; an explicit choice sticks.
    CHECK(std::abs(cert.chi.vector()[2] - 1.0) <= 1e-12);
    auto [game2, cert2] = build_gpt_disc_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                              fx.p_x, j, fx.vertex);
    CHECK(std::abs(cert2.chi.vector()[0] - 1.0) <= 1e-12);
    CHECK(std::abs(cert2.alpha - cert.alpha) <= 1e-12);

    CHECK_THROWS_AS(build_gpt_disc_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                        fx.p_x, 0),
                    ValidationError);
    // alpha + 1/j must stay below 1.
    CHECK_THROWS_AS(build_gpt_disc_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                        fx.p_x, 1),
                    ValidationError);
    CHECK_THROWS_AS(build_gpt_disc_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                        {0.4, 0.4}, j),
                    ValidationError);
    // Free state and compatible set leave nothing to discriminate.
    CHECK_THROWS_AS(build_gpt_disc_game(fx.model, fx.center, fx.coordinate_pair(0.5),
                                        fx.free_center, fx.ff, fx.p_x, j),
                    FreeInputGameError);
}

TEST_CASE("exclusion game construction on the square") {
    const SquareFixture fx;
    const GPTMeasurementSet sharp = fx.coordinate_pair(1.0);

    auto [game, cert] = build_gpt_excl_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                            fx.p_x);
    CHECK(std::abs(cert.beta - 1.0 / 32.0) <= 1e-9);
    CHECK(std::abs(cert.state_weight - 1.0) <= 1e-7);
    CHECK(std::abs(cert.set_weight - 1.0) <= 1e-7);
    CHECK(game.tail_multiplicity() == 1);
    CHECK(game.instruments().outcomes() == 3);
    for (bool degenerate : cert.xi_degenerate) CHECK_FALSE(degenerate);

    // Fully resourceful inputs are excluded perfectly; free pairs cannot
    // err less often than beta, and the best free response is beta itself.
    const double err = gpt_err_probability(game, fx.vertex, sharp).value;
    CHECK(err <= 1e-7);
    CHECK(err <= cert.beta * (1.0 - cert.state_weight) * (1.0 - cert.set_weight) + 1e-7);
    const auto pairs = gpt_sample_free_pairs(fx.model, fx.free_center, fx.ff, 2, 2, 40, 77);
    for (const auto& [sigma, mset] : pairs) {
        const double v = gpt_err_probability(game, sigma, mset).value;
        CHECK(v >= cert.beta - 1e-9);
    }
    const double best_free = gpt_best_free_response(fx.model, game, fx.free_center, fx.ff, 2, 2,
                                                    false);
    CHECK(std::abs(best_free - cert.beta) <= 1e-8);

    // Conditional outcome distributions are validated per row.
    CHECK_THROWS_AS(build_gpt_excl_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                        fx.p_x, {{0.5, 0.5}}),
                    DimensionError);
    CHECK_THROWS_AS(build_gpt_excl_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                        fx.p_x, {{0.5, 0.5}, {0.7, 0.7}}),
                    ValidationError);
    CHECK_THROWS_AS(build_gpt_excl_game(fx.model, fx.vertex, sharp, fx.free_center, fx.ff,
                                        fx.p_x, {{0.5, 0.5}, {1.5, -0.5}}),
                    ValidationError);
    CHECK_THROWS_AS(build_gpt_excl_game(fx.model, fx.center, fx.coordinate_pair(0.5),
                                        fx.free_center, fx.ff, fx.p_x),
                    FreeInputGameError);
}

TEST_CASE("end-to-end verification on the square fixture") {
    const SquareFixture fx;
    const GPTMeasurementSet sharp = fx.coordinate_pair(1.0);
    const std::size_t j = 10000;

    const VerificationReport rep =
        verify_gpt_advantage(fx.model, fx.vertex, sharp, fx.free_center, fx.ff, j, 12, 7);
    REQUIRE(rep.discrimination.has_value());
    REQUIRE(rep.exclusion.has_value());
    const DiscriminationReport& d = *rep.discrimination;
    const ExclusionReport& x = *rep.exclusion;

    CHECK(std::abs(d.alpha - 3.0 / 16.0) <= 1e-9);
    CHECK(std::abs(d.target - 8.0 / 3.0) <= 1e-6);
    CHECK(std::abs(d.numerator - 0.5) <= 1e-7);
    CHECK(std::abs(d.ratio_lower - 0.5 / (3.0 / 16.0 + 1e-4)) <= 1e-9);
    CHECK(d.identity_ok);
    CHECK(d.empirical_ok);
    CHECK(d.generic_ok);
    // The guaranteed lower bound sits 1/(alpha j + 1) below the product of
    // robustness factors, which exceeds the 2/j allowance at this size, so
    // the ratio clause cannot clear its threshold.
    CHECK_FALSE(d.ratio_ok);
    CHECK_FALSE(d.pass);
    CHECK(d.sample_values.size() == 12);

    CHECK(std::abs(x.beta - 1.0 / 32.0) <= 1e-9);
    CHECK(x.target <= 1e-6);
    CHECK(x.numerator <= 1e-7);
    CHECK(x.identity_ok);
    CHECK(x.ratio_ok);
    CHECK(x.empirical_ok);
    CHECK(x.generic_ok);
    CHECK(x.pass);

    CHECK_FALSE(rep.pass);
    CHECK(rep.n_samples == 12);
    CHECK(rep.seed == 7);

    // Same seed reproduces every number; a different seed draws different
    // free pairs.
    const VerificationReport again =
        verify_gpt_advantage(fx.model, fx.vertex, sharp, fx.free_center, fx.ff, j, 12, 7);
    CHECK(again.discrimination->sample_values == d.sample_values);
    CHECK(again.exclusion->sample_values == x.sample_values);
    CHECK(again.discrimination->empirical_denominator == d.empirical_denominator);
    CHECK(again.pass == rep.pass);
    for (std::size_t g = 0; g < d.generic_games.size(); ++g) {
        CHECK(again.discrimination->generic_games[g].resourceful_value ==
              d.generic_games[g].resourceful_value);
        CHECK(again.discrimination->generic_games[g].best_free_value ==
              d.generic_games[g].best_free_value);
    }
    const VerificationReport other =
        verify_gpt_advantage(fx.model, fx.vertex, sharp, fx.free_center, fx.ff, j, 12, 8);
    CHECK(other.discrimination->sample_values != d.sample_values);

    CHECK_THROWS_AS(
        verify_gpt_advantage(fx.model, fx.vertex, sharp, fx.free_center, fx.ff, j, 0, 7),
        ValidationError);
    CHECK_THROWS_AS(verify_gpt_advantage(fx.model, fx.center, fx.coordinate_pair(0.5),
                                         fx.free_center, fx.ff, j, 4, 7),
                    FreeInputGameError);
}

TEST_CASE("verification with a free state still certifies the set factor") {
    const SquareFixture fx;
    const VerificationReport rep = verify_gpt_advantage(
        fx.model, fx.center, fx.coordinate_pair(1.0), fx.free_center, fx.ff, 10000, 6, 21);
    const DiscriminationReport& d = *rep.discrimination;
    CHECK(d.state_robustness <= 1e-7);
    CHECK(std::abs(d.target - 4.0 / 3.0) <= 1e-6);
    CHECK(d.identity_ok);
    CHECK(d.empirical_ok);
    const ExclusionReport& x = *rep.exclusion;
    CHECK(x.state_weight <= 1e-7);
    CHECK(x.target <= 1e-6);
    CHECK(x.pass);
}

TEST_CASE("qubit fragment: embedded values and quantifiers agree") {
    const GPTModel oct = GPTModel::qubit_octahedron();
    const GPTFreeStateSet fc = GPTFreeStateSet::polytope({oct.barycenter()});
    const auto ff = GPTFreeMeasurementFamily::compatible();
    std::mt19937_64 rng(60601);

    // The embedding preserves the Born pairing exactly, for arbitrary
    // (non-diagonal) qubit operators. Effects always embed; states must have
    // a Bloch vector inside the octahedron, so draw one there.
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> r(3);
        double l1 = 0.0;
        for (double& c : r) {
            c = test_helpers::gauss(rng);
            l1 += std::abs(c);
        }
        for (double& c : r) c *= 0.85 / l1;
        ComplexMatrix rm(2, 2);
        rm(0, 0) = 0.5 * (1.0 + r[2]);
        rm(1, 1) = 0.5 * (1.0 - r[2]);
        rm(0, 1) = 0.5 * cplx(r[0], -r[1]);
        rm(1, 0) = 0.5 * cplx(r[0], r[1]);
        const State rho(HermitianOperator::trusted(std::move(rm)));
        HermitianOperator h = test_helpers::random_hermitian(rng, 2);
        // Compress to an effect: e = (h + ||h|| I) / (2 ||h||).
        const double nm = operator_norm(h) + 1e-9;
        const HermitianOperator effect = HermitianOperator::trusted(
            0.5 * ((1.0 / nm) * h.matrix() + ComplexMatrix::identity(2)));
        const GPTState gw = qubit_to_gpt_state(oct, rho);
        const GPTEffect ge = qubit_to_gpt_effect(oct, effect);
        const double born = trace_inner(effect, rho.matrix());
        CHECK(std::abs(dot(ge.vector(), gw.vector()) - born) <= 1e-12);
    }

    // The maximally mixed state lands on the barycenter.
    const State mixed(HermitianOperator::trusted(0.5 * ComplexMatrix::identity(2)));
    const std::vector<double> bary = qubit_to_gpt_state(oct, mixed).vector();
    for (std::size_t r = 0; r < 4; ++r)
        CHECK(std::abs(bary[r] - oct.barycenter()[r]) <= 1e-12);

    // Twenty random instances from the diagonal fragment, where the
    // octahedron and the quantum state space share states, measurements, and
    // measure-prepare dynamics.
    for (int rep = 0; rep < 20; ++rep) {
        const double p = 0.15 + 0.7 * test_helpers::uniform01(rng);
        const State rho(diag2(p, 1.0 - p));

        std::vector<std::vector<HermitianOperator>> povm_effects;
        for (int x = 0; x < 2; ++x) {
            const double a = 0.05 + 0.9 * test_helpers::uniform01(rng);
            const double b = 0.05 + 0.9 * test_helpers::uniform01(rng);
            povm_effects.push_back({diag2(a, b), diag2(1.0 - a, 1.0 - b)});
        }
        const POVMSet povm(povm_effects);

        std::vector<std::vector<Subchannel>> sub;
        for (int y = 0; y < 2; ++y) {
            const double q = 0.1 + 0.8 * test_helpers::uniform01(rng);
            const double s = test_helpers::uniform01(rng);
            const double v = test_helpers::uniform01(rng);
            sub.push_back({Subchannel::measure_prepare(diag2(q, 1.0 - q), diag2(s, 1.0 - s)),
                           Subchannel::measure_prepare(diag2(1.0 - q, q), diag2(v, 1.0 - v))});
        }
        const double p0 = 0.3 + 0.4 * test_helpers::uniform01(rng);
        const std::size_t tail = rep % 3 == 0 ? 3 : 1;
        const GameEnsemble qgame({p0, 1.0 - p0}, InstrumentSet(std::move(sub)), tail);

        const GPTState gw = qubit_to_gpt_state(oct, rho);
        const GPTMeasurementSet ge = qubit_to_gpt_measurement_set(oct, povm);
        const GPTGameEnsemble gg = qubit_to_gpt_game(oct, qgame);

        CHECK(std::abs(gpt_succ_probability(gg, gw, ge).value -
                       succ_probability(qgame, rho, povm).value) <= 1e-6);
        CHECK(std::abs(gpt_err_probability(gg, gw, ge).value -
                       err_probability(qgame, rho, povm).value) <= 1e-6);

        CHECK(std::abs(gpt_robustness_state(oct, gw, fc).value -
                       robustness_state(rho, FreeStateSet::max_mixed()).value) <= 1e-6);
        CHECK(std::abs(gpt_weight_state(oct, gw, fc).value -
                       weight_state(rho, FreeStateSet::max_mixed()).value) <= 1e-6);
        CHECK(std::abs(gpt_robustness_mset(oct, ge, ff).value -
                       robustness_povmset(povm, FreePOVMSetFamily::compatible()).value) <= 1e-6);
        CHECK(std::abs(gpt_weight_mset(oct, ge, ff).value -
                       weight_povmset(povm, FreePOVMSetFamily::compatible()).value) <= 1e-6);
    }

    // Non-qubit shapes are rejected.
    const GPTModel square = GPTModel::gbit();
    const State rho(diag2(0.5, 0.5));
    CHECK_THROWS_AS(qubit_to_gpt_state(square, rho), DimensionError);
    std::mt19937_64 rng3(5);
    const State rho3(test_helpers::random_state_matrix(rng3, 3));
    CHECK_THROWS_AS(qubit_to_gpt_state(oct, rho3), DimensionError);
}

TEST_CASE("random objects: validity across seeds and determinism") {
    for (const GPTModel& model : {GPTModel::gbit(), GPTModel::qubit_octahedron()}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            CHECK_NOTHROW(gpt_random_state(model, seed));
            CHECK_NOTHROW(gpt_random_measurement_set(model, 2, 3, seed));
            CHECK_NOTHROW(gpt_random_instrument_set(model, 2, 2, seed));
        }
        const GPTState a = gpt_random_state(model, 42);
        const GPTState b = gpt_random_state(model, 42);
        CHECK(a.vector() == b.vector());
        const GPTMeasurementSet ma = gpt_random_measurement_set(model, 2, 2, 42);
        const GPTMeasurementSet mb = gpt_random_measurement_set(model, 2, 2, 42);
        CHECK(ma.effect(0, 0) == mb.effect(0, 0));
        CHECK(ma.effect(1, 1) == mb.effect(1, 1));
        const GPTState c = gpt_random_state(model, 43);
        CHECK(a.vector() != c.vector());
    }
    CHECK_THROWS_AS(gpt_random_measurement_set(GPTModel::gbit(), 0, 2, 1), DimensionError);
    CHECK_THROWS_AS(gpt_random_instrument_set(GPTModel::gbit(), 2, 0, 1), DimensionError);

    // Sampled free pairs really are free: zero robustness for both members.
    const SquareFixture fx;
    const auto pairs = gpt_sample_free_pairs(fx.model, fx.free_center, fx.ff, 2, 2, 4, 11);
    REQUIRE(pairs.size() == 4);
    for (const auto& [sigma, mset] : pairs) {
        CHECK(std::abs(gpt_robustness_state(fx.model, sigma, fx.free_center).value) <= 1e-7);
        CHECK(std::abs(gpt_robustness_mset(fx.model, mset, fx.ff).value) <= 1e-7);
    }
    CHECK_THROWS_AS(gpt_sample_free_pairs(fx.model, fx.free_center, fx.ff, 0, 2, 1, 1),
                    DimensionError);
}

TEST_CASE("enumeration budgets stop oversized instances") {
    const SquareFixture fx;
    // 13 binary settings put the parent count past the compatibility cap.
    std::vector<std::vector<std::vector<double>>> wide(
        13, {{0.0, 0.0, 0.5}, {0.0, 0.0, 0.5}});
    const GPTMeasurementSet trivial_wide(fx.model, wide);
    CHECK_THROWS_AS(gpt_robustness_mset(fx.model, trivial_wide, fx.ff), EnumerationCapError);

    // 17 game settings overflow the deterministic strategy budget.
    const GPTSubchannel id = GPTSubchannel::matrix(fx.model, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const std::vector<std::vector<GPTSubchannel>> sub(17, std::vector<GPTSubchannel>{id});
    const GPTGameEnsemble game(std::vector<double>(17, 1.0 / 17.0),
                               GPTInstrumentSet(fx.model, sub));
    CHECK_THROWS_AS(gpt_best_free_response(fx.model, game, fx.free_center, fx.ff, 2, 2, true),
                    EnumerationCapError);
}
