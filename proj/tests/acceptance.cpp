// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <Eigen/Dense>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "divisor_support.hpp"
#include "hopf/connectivity.hpp"
#include "hopf/explorer.hpp"
#include "jacobian_support.hpp"

using namespace hopf;
using hopf::testing::random_divisor;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

bool report(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || secs < budget_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d %s: %s (%s; %.2f s", id, name, pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    if (budget_s > 0.0) std::printf(" of %.0f s budget", budget_s);
    std::printf(")\n");
    std::fflush(stdout);
    return pass;
}

GraphDivisor random_regular(std::mt19937_64& rng, int n, const HopfParameter& h) {
    for (;;) {
        GraphDivisor d = random_divisor(rng, n);
        if (is_regular(d, h)) return d;
    }
}

Outcome branch_counts() {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(101);
    int bad = 0, total = 0;
    for (int n = 1; n <= 4; ++n)
        for (int i = 0; i < 200; ++i) {
            const SpectralCurve s = spectral_curve(random_regular(rng, n, h), h);
            int count = 0;
            for (const auto& b : s.branch_points) count += b.multiplicity;
            bad += count != 4 * n || static_cast<int>(s.branch_points.size()) != 4 * n || s.genus != 2 * n - 1;
            ++total;
        }
    return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " curves with 4n branch points, genus 2n-1"};
}

Outcome dimensions() {
    int bad = 0;
    for (int n = 1; n <= 8; ++n) {
        const DimensionCount d = dimension_count(n);
        bad += d.base != 2 * n + 1 || d.fiber != 2 * n - 1 || d.total != 4 * n || d.base + d.fiber != d.total;
    }
    return {bad == 0, "(2n+1) + (2n-1) = 4n for n = 1..8, mismatches " + std::to_string(bad)};
}

Outcome riemann_relations() {
    const auto h = HopfParameter::standard();
    std::mt19937_64 rng(303);
    double worst_sym = 0.0, worst_eig = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
        const PeriodData p = period_matrix(spectral_curve(random_regular(rng, 1 + i % 2, h), h));
        const Eigen::MatrixXcd& t = p.riemann;
        worst_sym = std::max(worst_sym, (t - t.transpose()).norm() / t.norm());
        const Eigen::MatrixXd im = 0.5 * (t.imag() + t.imag().transpose());
        worst_eig = std::min(worst_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff());
    }
    std::ostringstream s;
    s << "50 curves, max symmetry residual " << worst_sym << ", min eig Im tau " << worst_eig;
    return {worst_sym <= 1e-8 && worst_eig > 0.0, s.str()};
}

Outcome lemniscatic() {
    const auto h = HopfParameter::standard();
    const GraphDivisor id(Coeffs{0.0, 1.0}, Coeffs{-1.0, 0.0});
    const PeriodData p = period_matrix(spectral_curve(id, h));
    const cplx j = hopf::testing::j_invariant(p.riemann(0, 0));
    const double err = std::abs(j - 1728.0) / 1728.0;
    std::ostringstream s;
    s << "tau_S = " << p.riemann(0, 0) << ", |j - 1728| / 1728 = " << err;
    return {err <= 1e-6, s.str()};
}

Outcome connectivity() {
    const auto h = HopfParameter::standard();
    struct Pair {
        int n;
        std::uint64_t seed;
        ModuliPoint a, b;
    };
    std::vector<Pair> pairs;
    for (int n = 1; n <= 3; ++n) {
        std::mt19937_64 rng(500 + n);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            Pair p{n, static_cast<std::uint64_t>(k), {random_regular(rng, n, h), {}}, {random_regular(rng, n, h), {}}};
            for (int i = 0; i < 2 * (2 * n - 1); ++i) {
                p.a.fiber.coords.push_back(u(rng));
                p.b.fiber.coords.push_back(u(rng));
            }
            pairs.push_back(std::move(p));
        }
    }
    const auto attempt = [&](const Pair& p, std::uint64_t seed) {
        PathConfig cfg;
        cfg.seed = seed;
        try {
            const ModuliPath m = connect_moduli(p.a, p.b, h, cfg);
            return m.base.certified_margin >= 1e-10 && m.base.monodromy_safe && m.fiber.endpoint_residual <= 1e-6;
        } catch (const Error&) {
            return false;
        }
    };
    std::vector<char> first(pairs.size()), retried(pairs.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i; (i = next++) < pairs.size();) {
            first[i] = attempt(pairs[i], pairs[i].seed);
            if (!first[i]) retried[i] = attempt(pairs[i], pairs[i].seed + 1000003);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < thread_count(); ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    bool pass = true;
    std::ostringstream s;
    for (int n = 1; n <= 3; ++n) {
        int ok = 0, rescued = 0, lost = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (pairs[i].n != n) continue;
            ok += first[i];
            rescued += !first[i] && retried[i];
            lost += !first[i] && !retried[i];
        }
        pass = pass && ok >= 99 && lost == 0;
        s << "n=" << n << ": " << ok << "/100 first try, " << rescued << " after retry, " << lost << " lost; ";
    }
    s << "threads " << thread_count();
    return {pass, s.str()};
}

Outcome stratification() {
    std::mt19937_64 rng(606);
    int combos = 0, bad = 0;
    for (int n = 1; n <= 5; ++n)
        for (int k = 0; k <= n; ++k)
            for (const auto& pattern : hopf::testing::partitions(k))
                for (int trial = 0; trial < 3; ++trial) {
                    ++combos;
                    const auto planted = hopf::testing::planted_jumps(rng, n, pattern);
                    const StratumReport r = stratify(planted.divisor);
                    std::vector<ProjectiveRoot> got, want;
                    for (const auto& j : r.jumps) got.push_back({j.point, j.multiplicity});
                    for (std::size_t i = 0; i < planted.points.size(); ++i)
                        want.push_back({planted.points[i], planted.multiplicities[i]});
                    bad += r.k != k || !hopf::testing::same_roots(got, want, 1e-6);
                }
    return {bad == 0, std::to_string(combos - bad) + "/" + std::to_string(combos) +
                          " planted (n, k, pattern) cases recovered exactly"};
}

Outcome closure() {
    const auto h = HopfParameter::standard();
    bool pass = true;
    std::ostringstream s;
    for (int n = 1; n <= 3; ++n) {
        const auto family = limit_family(n, h, 7);
        bool monotone = true, jump_free = true;
        for (std::size_t i = 0; i + 1 < family.size(); ++i) {
            if (i > 0 && family[i].margin > family[i - 1].margin) monotone = false;
            if (family[i].jumps != 0) jump_free = false;
        }
        const double last = family[family.size() - 2].margin;
        pass = pass && monotone && jump_free && last < 1e-12 && family.back().jumps >= 1;
        s << "n=" << n << ": margin " << family.front().margin << " -> " << last << (monotone ? " monotone" : " NOT monotone")
          << (jump_free ? ", no jumps for t < 1" : ", jumps before the limit") << (n < 3 ? "; " : "");
    }
    return {pass, s.str()};
}

double proportional_error(const BinaryForm& got, const Coeffs& want) {
    const auto g = got.coefficients();
    if (g.size() != want.size()) return std::numeric_limits<double>::infinity();
    cplx num{0.0};
    double den = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        num += std::conj(want[i]) * g[i];
        den += std::norm(want[i]);
    }
    const cplx c = num / den;
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) err += std::norm(g[i] - c * want[i]);
    return std::sqrt(err) / coeffs::norm(g);
}

Outcome oracles() {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<int> degree(1, 6), two_up(2, 6);
    double worst_res = 0.0, worst_disc = 0.0, worst_gcd = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto f = hopf::testing::random_planted(rng, degree(rng));
        const auto g = hopf::testing::random_planted(rng, degree(rng));
        worst_res = std::max(worst_res, hopf::testing::relative_error(resultant(BinaryForm(f.coeffs), BinaryForm(g.coeffs)),
                                                                      hopf::testing::resultant_oracle(f, g)));

        const auto d = hopf::testing::random_planted(rng, two_up(rng));
        worst_disc = std::max(worst_disc, hopf::testing::relative_error(discriminant(BinaryForm(d.coeffs)),
                                                                        hopf::testing::discriminant_oracle(d)));

        // Planted common roots: gcd must be lead * prod (s - c_i) up to scale.
        const int df = degree(rng), dg = degree(rng);
        const int k = std::uniform_int_distribution<int>(0, std::min(df, dg))(rng);
        std::vector<cplx> common(k), fa, ga;
        for (auto& c : common) c = hopf::testing::random_complex(rng);
        fa = ga = common;
        for (int i = k; i < df; ++i) fa.push_back(hopf::testing::random_complex(rng));
        for (int i = k; i < dg; ++i) ga.push_back(hopf::testing::random_complex(rng));
        const auto pf = hopf::testing::planted_form(fa, hopf::testing::random_complex(rng));
        const auto pg = hopf::testing::planted_form(ga, hopf::testing::random_complex(rng));
        const auto want = hopf::testing::planted_form(common, 1.0);
        const BinaryForm got = gcd(BinaryForm(pf.coeffs), BinaryForm(pg.coeffs));
        worst_gcd = std::max(worst_gcd, proportional_error(got, want.coeffs));
    }
    std::ostringstream s;
    s << "500 trials, max relative error: resultant " << worst_res << ", discriminant " << worst_disc << ", gcd "
      << worst_gcd;
    return {worst_res <= 1e-8 && worst_disc <= 1e-8 && worst_gcd <= 1e-8, s.str()};
}

Outcome genericity() {
    const auto h = HopfParameter::standard();
    const CensusRecord c = census(2, 10000, h, 909, thread_count());
    std::ostringstream s;
    s << c.trials << " samples at n=2: S_0 " << c.counts[0] << ", irregular " << c.irregular;
    return {c.counts[0] == c.trials && c.irregular == 0, s.str()};
}

}  // namespace

int main() {
    bool all = true;
    all &= report(1, "branch/genus counts", 10, branch_counts);
    all &= report(2, "dimension bookkeeping", 0, dimensions);
    all &= report(3, "Riemann relations", 60, riemann_relations);
    all &= report(4, "lemniscatic oracle", 5, lemniscatic);
    all &= report(5, "connectivity certification", 300, connectivity);
    all &= report(6, "stratification exactness", 0, stratification);
    all &= report(7, "closure illustration", 5, closure);
    all &= report(8, "oracle equivalence", 0, oracles);
    all &= report(9, "Monte-Carlo genericity", 0, genericity);
    std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
    return all ? 0 : 1;
}
