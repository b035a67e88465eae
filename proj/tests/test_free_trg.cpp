#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctrg/errors.hpp"
#include "ctrg/flow.hpp"
#include "ctrg/free_trg.hpp"
#include "ctrg/oracles.hpp"

using namespace ctrg;

namespace {

RunConfig torus(int k, double mass, std::size_t chi = 64) {
    RunConfig c;
    c.mass = mass;
    c.chi_max = chi;
    c.sites_exponent = k;
    c.oracle = false;
    return c;
}

} // namespace

TEST_CASE("level-0 weight") {
    const FreeWeightState s = init_free(0.5);
    CHECK(s.chi == 1);
    const Mat a = s.full_a();
    CHECK(a(0, 0) == doctest::Approx(1.0 + 0.125));
    CHECK(a(0, 1) == doctest::Approx(-1.0));
    const Mat m = s.vertex_matrix();
    CHECK(m.rows() == 4);
    CHECK(max_abs(m - transpose(m)) == 0.0);
    CHECK_THROWS_AS(init_free(-1.0), InvalidConfig);
    CHECK_NOTHROW(init_free(0.0));
}

TEST_CASE("single vertex closure matches the one-site torus") {
    const FreeWeightState s = init_free(2.0);
    CHECK(close_trace(s) == doctest::Approx(brute_force_logZ(1, 2.0)).epsilon(1e-12));
}

TEST_CASE("flow reproduces small tori exactly") {
    for (double m : {0.2, 1.0, 2.5}) {
        const FlowResult r2 = run_free_flow(torus(1, m));
        CHECK(r2.report.f0 * 4.0 == doctest::Approx(-brute_force_logZ(2, m)).epsilon(1e-10));
        const FlowResult r4 = run_free_flow(torus(2, m));
        CHECK(r4.report.f0 * 16.0 == doctest::Approx(-brute_force_logZ(4, m)).epsilon(1e-10));
        CHECK(r4.report.f0 == doctest::Approx(torus_f0(4, m)).epsilon(1e-10));
    }
}

TEST_CASE("bond dimension doubles every two levels before truncation") {
    // exact while the B spectrum stays inside double precision, through level 8 at this mass
    RunConfig c = torus(5, 0.3, 1024);
    c.zero_tol = 1e-15;
    const FlowResult r = run_free_flow(c);
    for (const auto& lv : r.trace.levels) {
        if (lv.level % 2 == 0 && lv.level <= 8) CHECK(lv.chi == (std::size_t{1} << (lv.level / 2)));
        if (lv.level % 2 == 1 && lv.level <= 7) {
            // half of the odd-level spectrum vanishes
            std::size_t zeros = 0;
            for (double b : lv.singular_values) zeros += std::abs(b) < 1e-10 * lv.singular_values.front();
            CHECK(zeros == lv.singular_values.size() / 2);
        }
        CHECK(lv.structure_error < 1e-9);
    }
}

TEST_CASE("split tags every component with its sector") {
    FreeWeightState s = init_free(1.0);
    SplitData sp = split_weight(s, 8);
    CHECK(sp.chi_next() == 2);
    CHECK(sp.d[0] >= sp.d[1]);
    const LoopKernel k = build_loop(s, sp);
    s = coarse_grain_free(s, sp, k);
    sp = split_weight(s, 8);
    CHECK(sp.discarded_zero_count == 2);
    for (int sec : sp.sector) CHECK((sec == 0 || sec == 1));
    const Mat up = sp.upper(), lo = sp.lower();
    for (std::size_t j = 0; j < sp.chi_next(); ++j)
        CHECK(lo(0, j) == doctest::Approx(sp.sector[j] == 1 ? -up(0, j) : up(0, j)));
}

TEST_CASE("truncation converges toward the exact value") {
    RunConfig c = torus(20, 0.3, 8);
    c.oracle = true;
    const double e8 = *run_free_flow(c).report.delta_f0;
    c.chi_max = 16;
    const double e16 = *run_free_flow(c).report.delta_f0;
    c.chi_max = 32;
    const double e32 = *run_free_flow(c).report.delta_f0;
    CHECK(e16 < e8);
    CHECK(e32 < e16);
    CHECK(e32 < 1e-9);
}

TEST_CASE("free-energy accumulator weights") {
    FreeEnergyAccumulator acc(4);
    acc.push(1, 2.0);
    acc.push(2, 4.0);
    CHECK(acc.per_site == doctest::Approx(2.0));
    CHECK(acc.per_level_log[0].vertices_remaining == 8.0);
    CHECK(acc.total_sites() == 16.0);
}

TEST_CASE("massless flow is rejected") {
    // the plaquette loop has a zero mode at m = 0
    CHECK_THROWS_AS(run_free_flow(torus(10, 0.0, 16)), InvalidConfig);
    CHECK(std::isfinite(exact_f0(0.0)));
}
