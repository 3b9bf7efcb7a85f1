#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rns/error.hpp"
#include "rns/norms.hpp"
#include "rns/prob.hpp"

using namespace rns;

namespace {

// Simpson integration of |z|^r phi(z) over [-40, 40].
double simpson_abs_moment(double r) {
    const int n = 200000;
    const double a = -40.0, h = 80.0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = a + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::pow(std::abs(z), r) * std::exp(-0.5 * z * z);
    }
    return s * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

SpectralField single_pair(const GridSpec& g) {
    SpectralField F(g);
    const std::size_t s = g.slot({1, 0, 0});
    F.at(1, s) = cplx(0.6, 0.2);
    F.at(1, g.table().conjugate[s]) = cplx(0.6, -0.2);
    return F;
}

}  // namespace

TEST_CASE("gaussian absolute moments") {
    CHECK(gaussian_abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gaussian_abs_moment(4.0) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
    for (double r : {1.0, 2.5, 3.0, 6.0, 8.0})
        CHECK(std::pow(gaussian_abs_moment(r), r) == doctest::Approx(simpson_abs_moment(r)).epsilon(1e-10));
    CHECK(gaussian_moment_constant() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("wilson interval") {
    const Interval a = wilson_interval(0, 100);
    CHECK(a.lo == 0.0);
    CHECK(a.hi > 0.0);
    const Interval b = wilson_interval(50, 100);
    CHECK(b.lo < 0.5);
    CHECK(b.hi > 0.5);
    CHECK(b.hi - 0.5 == doctest::Approx(0.5 - b.lo));
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw Error(ErrorCode::DomainError, "x"); }), Error);
}

TEST_CASE("run_moment_experiment") {
    EnsembleConfig cfg;
    cfg.samples = 100000;
    cfg.master_seed = 17;
    const double rs[] = {2.0, 3.0, 4.0, 6.0, 8.0};
    const double one[] = {1.0};
    const auto rows = run_moment_experiment(one, rs, cfg);
    CHECK(rows[0].estimate == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rows[2].estimate == doctest::Approx(std::pow(3.0, 0.25)).epsilon(0.02));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].within_bound);
        if (i > 0) CHECK(rows[i].estimate >= rows[i - 1].estimate - 3 * rows[i].std_error);
    }

    EnsembleConfig other = cfg;
    other.master_seed = 18;
    const double mixed[] = {0.6, 0.8};
    const auto rows2 = run_moment_experiment(mixed, rs, other);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double sigma = std::hypot(rows[i].std_error, rows2[i].std_error);
        CHECK(std::abs(rows[i].estimate - rows2[i].estimate) < 4 * sigma);
        CHECK(rows2[i].oracle == doctest::Approx(rows[i].oracle).epsilon(1e-15));
    }

    EnsembleConfig few = cfg;
    few.samples = 50;
    CHECK_THROWS_WITH_AS(run_moment_experiment(one, rs, few), doctest::Contains("InsufficientSamples"), Error);
}

TEST_CASE("fit_tail") {
    std::vector<double> lam, freq;
    for (int i = 0; i < 8; ++i) {
        lam.push_back(0.2 * i);
        freq.push_back(0.5 * std::exp(-2.0 * lam.back() * lam.back()));
    }
    const TailFit fit = fit_tail(lam, freq, 100000);
    CHECK(fit.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.points == 8);
    const std::vector<double> flat{1.0, 1.0, 0.0};
    CHECK_THROWS_WITH_AS(fit_tail(std::vector<double>{1, 2, 3}, flat, 1000), doctest::Contains("DegenerateTail"), Error);
}

TEST_CASE("event_membership") {
    CHECK(event_membership(0.0, 0.5, 1.0));
    CHECK(event_membership(10.0, std::numeric_limits<double>::infinity(), 1.0));
    CHECK_FALSE(event_membership(2.0, 2.0, 1.0));
    CHECK(event_membership(1.999, 2.0, 1.0));
}

TEST_CASE("run_tail_experiment: single pair against the Gaussian tail") {
    const GridSpec g(8);
    const SpectralField f = single_pair(g);
    EnsembleConfig cfg;
    cfg.samples = 4000;
    cfg.master_seed = 5;
    cfg.threads = 1;
    const double p = 3.0, q = 4.0, T = 1.0;
    // c0: the norm with h = 1, on the grid the experiment accepts.
    const TimeGrid grid = heat_lplq_detailed(f, p, q, TimeGrid::log_spaced(T, cfg.time_nodes)).grid;
    const double qs[1] = {q};
    const double c0 = cumulative_lp(lq_profile(f, qs, grid)[0], grid.with_origin(), p).back();
    const double fn = sobolev_norm(f, -cfg.alpha);

    std::vector<double> lambdas;
    for (int i = 0; i < 8; ++i) lambdas.push_back((0.0 + 0.4 * i) * c0 / fn);
    const TailReport rep = run_tail_experiment(f, p, q, T, lambdas, cfg);
    CHECK(rep.rows[0].freq == 1.0);
    for (const auto& row : rep.rows) {
        const double P = std::erfc(row.lambda * fn / c0 / std::sqrt(2.0));
        CHECK(std::abs(row.freq - P) <= 3.0 * std::sqrt(P * (1 - P) / cfg.samples) + 1e-12);
        CHECK(row.ci_lo <= row.freq);
        CHECK(row.ci_hi >= row.freq);
    }
    CHECK(rep.fit.beta > 0.0);
    for (double v : rep.sample_norms) CHECK(v >= 0.0);

    EnsembleConfig threaded = cfg;
    threaded.threads = 3;
    const TailReport again = run_tail_experiment(f, p, q, T, lambdas, threaded);
    CHECK(again.sample_norms == rep.sample_norms);

    const double below[] = {0.0, *std::min_element(rep.sample_norms.begin(), rep.sample_norms.end()) / fn * 0.5, 1e9};
    CHECK_THROWS_AS(run_tail_experiment(f, p, q, T, below, cfg), Error);
    EnsembleConfig bad = cfg;
    bad.samples = 10;
    CHECK_THROWS_AS(run_tail_experiment(f, p, q, T, lambdas, bad), Error);
}

TEST_CASE("coverage_study") {
    const GridSpec g(8);
    const SpectralField f = single_pair(g);
    EnsembleConfig cfg;
    cfg.samples = 500;
    cfg.master_seed = 9;
    CoverageConfig cov;
    cov.max_rung = 0;
    cov.lambda = 1e9;
    const CoverageReport huge = coverage_study(f, cov, cfg);
    for (const auto& row : huge.rows)
        if (row.ladder == "delta") CHECK(row.fraction == 1.0);

    cov.max_rung = 10;
    cov.lambda = 0.5;
    const CoverageReport rep = coverage_study(f, cov, cfg);
    double prev[3] = {0, 0, 0};
    for (const auto& row : rep.rows) {
        const int k = row.ladder == "lambda" ? 0 : (row.ladder == "delta" ? 1 : 2);
        CHECK(row.fraction >= prev[k]);
        prev[k] = row.fraction;
    }
    CHECK(prev[2] > 0.99);

    std::ostringstream out;
    write_coverage_csv(out, rep.rows);
    CHECK(out.str().rfind("ladder,J,fraction\nlambda,0,", 0) == 0);

    CoverageConfig critical = cov;
    critical.p2 = 4.0;
    CHECK_THROWS_AS(coverage_study(f, critical, cfg), Error);
}
