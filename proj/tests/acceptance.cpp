// Acceptance suite: statistical verification of the limiting laws against
// closed-form oracles, one PASS/FAIL line per criterion. Exits nonzero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "evp/experiments.hpp"
#include "evp/point_process.hpp"
#include "evp/rng.hpp"
#include "evp/scenario.hpp"
#include "evp/stats.hpp"

namespace fs = std::filesystem;
using namespace evp;

namespace {

int g_failures = 0;
constexpr std::uint64_t kSeed = 20260811;

void report(bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5g", v);
    return buf;
}

const MetricRow& find_row(const ExperimentReport& r, const std::string& metric,
                          std::size_t n, const std::string& param = "") {
    for (const auto& row : r.rows)
        if (row.metric == metric && row.n == n && (param.empty() || row.param == param))
            return row;
    throw std::runtime_error("metric row not found: " + metric);
}

// Adaptive Simpson quadrature (oracle helper, independent of the library).
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), 1e-12, 40);
}

// Criterion 1: exact Frechet argmax law. delta == 0, c_j = j, alpha = 1,
// n = 100, 2e5 replicates. Oracle: quadrature of int prod_{i!=j} F_i dF_j
// confirms P(argmax = j) = c_j/5050 to 1e-8; then the empirical index
// frequencies must sit within total variation 0.01 of that law, in under
// two minutes single-threaded.
void criterion_argmax_exact() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 100;
    const double dn = 5050.0;

    double worst_quad = 0.0;
    for (std::size_t j : {1UL, 37UL, 100UL}) {
        auto integrand = [&](double t) {
            const double x = t / (1.0 - t);
            if (x <= 0.0) return 0.0;
            double exponent = 0.0;
            for (std::size_t i = 1; i <= n; ++i)
                if (i != j) exponent += static_cast<double>(i) / dn;
            const double prod = std::exp(-exponent / x);
            const double pdf =
                std::exp(-static_cast<double>(j) / dn / x) * static_cast<double>(j) / dn /
                (x * x);
            return prod * pdf / ((1.0 - t) * (1.0 - t));
        };
        const double p = integrate(integrand, 1e-9, 1.0 - 1e-9);
        worst_quad = std::max(worst_quad, std::fabs(p - static_cast<double>(j) / dn));
    }

    ExperimentConfig config{TailModel(1.0, WeightScheme::power(1.0), Perturbation::zero())};
    config.kind = ExperimentKind::Argmax;
    config.n_values = {n};
    config.replicates = 200000;
    config.seed = kSeed;
    const auto rep = run_argmax_experiment(config);
    const double tv = find_row(rep, "tv", n).value;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool pass = worst_quad < 1e-8 && tv < 0.01 && elapsed < 120.0;
    report(pass, "exact-frechet-argmax-law",
           "quadrature |p_j - c_j/5050| = " + fmt(worst_quad) + " (< 1e-8), TV = " +
               fmt(tv) + " (< 0.01), " + fmt(elapsed) + "s single-threaded (< 120s)");
}

// Criterion 2: exact max law. delta == 0, every n in {10, 100, 2000}: KS of
// the scaled max against exp(-1/x) has p > 0.001 at 1e5 replicates.
void criterion_max_exact() {
    ExperimentConfig config{TailModel(1.0, WeightScheme::power(1.0), Perturbation::zero())};
    config.kind = ExperimentKind::Max;
    config.n_values = {10, 100, 2000};
    config.replicates = 100000;
    config.seed = kSeed;
    const auto rep = run_max_experiment(config);
    bool pass = true;
    std::string detail;
    for (std::size_t n : config.n_values) {
        const auto& row = find_row(rep, "ks", n);
        pass = pass && row.p_value > 0.001;
        detail += "p(n=" + std::to_string(n) + ") = " + fmt(row.p_value) + "  ";
    }
    report(pass, "exact-max-law", detail + "(each > 0.001)");
}

// Criterion 3: Theorem-3 convergence trend. uniform_decay(m0=0.5, lambda=1),
// beta = 1, alpha = 1: the argmax-location KS against t^2 decreases strictly
// beyond the 1.63/sqrt(R) noise band across n in {50, 200, 2000}, and
// KS(2000) < 0.03 at 1e5 replicates.
void criterion_argmax_trend() {
    ExperimentConfig config{TailModel(1.0, WeightScheme::power(1.0),
                                      Perturbation::uniform_decay(0.5, 1.0))};
    config.kind = ExperimentKind::Argmax;
    config.n_values = {50, 200, 2000};
    config.replicates = 100000;
    config.seed = kSeed;
    const auto rep = run_argmax_experiment(config);
    const double band = thresholds::kKsNoiseScale /
                        std::sqrt(static_cast<double>(config.replicates));
    std::vector<double> ks;
    for (std::size_t n : config.n_values) ks.push_back(find_row(rep, "ks", n).value);
    const bool strict = ks[1] < ks[0] - band && ks[2] < ks[1] - band;
    const bool final_ok = ks[2] < 0.03;
    report(strict && final_ok, "theorem3-argmax-trend",
           "KS = {" + fmt(ks[0]) + ", " + fmt(ks[1]) + ", " + fmt(ks[2]) +
               "} strictly decreasing beyond band " + fmt(band) + "; KS(2000) < 0.03");
}

// Criterion 4: Proposition 1. The argmax location of the truncated limit
// process (mu with cdf t^2, alpha = 1, default epsilon) is mu-distributed:
// KS p > 0.001 at 1e5 replicates.
void criterion_poisson_argmax() {
    ExperimentConfig config{TailModel(1.0, WeightScheme::power(1.0), Perturbation::zero())};
    config.kind = ExperimentKind::Argmax;
    config.source = SampleSource::PoissonLimit;
    config.replicates = 100000;
    config.seed = kSeed;
    const auto rep = run_argmax_experiment(config);
    const auto& row = find_row(rep, "ks", 0);
    report(row.p_value > 0.001 && rep.empty_config_count == 0, "proposition1-argmax-law",
           "KS = " + fmt(row.value) + ", p = " + fmt(row.p_value) + " (> 0.001), " +
               std::to_string(rep.empty_config_count) + " empty draws");
}

// Criterion 5: Theorem 1 via counts. Box counts of the limit process match
// the mu x gamma masses: mean and variance within 4 SE, covariances of the
// disjoint boxes within 4 SE of 0, for 4 boxes at 1e5 replicates.
void criterion_poisson_counts() {
    ExperimentConfig config{TailModel(1.0, WeightScheme::power(1.0), Perturbation::zero())};
    config.kind = ExperimentKind::PoissonCounts;
    config.replicates = 100000;
    config.seed = kSeed;
    const double inf = std::numeric_limits<double>::infinity();
    config.boxes = {{0.0, 0.5, 0.1, inf},
                    {0.5, 1.0, 0.1, inf},
                    {0.0, 0.5, 0.05, 0.1},
                    {0.5, 1.0, 0.05, 0.1}};
    const auto rep = run_poisson_count_experiment(config);
    std::size_t covs = 0;
    for (const auto& row : rep.rows)
        if (row.metric == "cov") ++covs;
    report(rep.passed() && covs == 6, "theorem1-box-counts",
           "4 boxes: mean/var within 4 SE, " + std::to_string(covs) +
               " disjoint covariances within 4 SE of 0");
}

// Criterion 6: Laplace functional. |empirical - exact| < 3 SE for the
// rectangle with oracle value exp(-0.25) at n = 2000, 1e5 replicates; the
// f == 0 path returns exactly 1.0 on both sides.
void criterion_laplace() {
    ExperimentConfig config{TailModel(1.0, WeightScheme::constant(), Perturbation::zero())};
    config.kind = ExperimentKind::Laplace;
    config.n_values = {2000};
    config.replicates = 100000;
    config.seed = kSeed;
    const double inf = std::numeric_limits<double>::infinity();
    config.test_functions = {TestFunction(),
                             TestFunction({{std::log(2.0), 0.0, 1.0, 2.0, inf}})};
    const auto rep = run_laplace_experiment(config);
    const auto& zero = find_row(rep, "laplace_diff", 2000, "f=0");
    const auto& rect = find_row(rep, "laplace_diff", 2000, "f=1");

    const PoissonSpec spec(power_limit_measure(0.0), TailMeasure::frechet(1.0),
                           PoissonSpec::default_epsilon(1.0));
    const double exact = laplace_exact(spec, config.test_functions[1]);
    const bool oracle_ok = std::fabs(exact - std::exp(-0.25)) < 1e-12;

    report(zero.value == 0.0 && rect.value < 3.0 * rect.std_error && oracle_ok,
           "laplace-functional",
           "f=0 exact; |emp - exp(-0.25)| = " + fmt(rect.value) + " < 3 SE = " +
               fmt(3.0 * rect.std_error));
}

// Criterion 7: ladder marginals. At t in {0, 0.5} with beta = 1, alpha = 1,
// n = 2000: KS of L(t) against exp(-(1 - t^2)/x) < 0.03 at 1e5 replicates,
// and the L(0) sample coincides with the max sample draw for draw under the
// same seed.
void criterion_ladder() {
    const TailModel model(1.0, WeightScheme::power(1.0), Perturbation::zero());
    const std::size_t n = 2000, replicates = 100000;
    const std::vector<double> grid{0.0, 0.5};
    std::size_t empties = 0;
    const auto ladder = collect_row_ladder(model, n, grid, replicates, kSeed, 1, &empties);
    const auto maxima = collect_row_maxima(model, n, replicates, kSeed, 1);

    bool identical = true;
    for (std::size_t r = 0; r < replicates; ++r)
        identical = identical && ladder[r * 2] == maxima[r];

    double ks0 = 0.0, ks5 = 0.0;
    {
        std::vector<double> m0(replicates), m5(replicates);
        for (std::size_t r = 0; r < replicates; ++r) {
            m0[r] = ladder[r * 2];
            m5[r] = ladder[r * 2 + 1];
        }
        ks0 = ks_one_sample(m0, [](double x) {
                  return x <= 0.0 ? 0.0 : std::exp(-1.0 / x);
              }).statistic;
        ks5 = ks_one_sample(m5, [](double x) {
                  return x <= 0.0 ? 0.0 : std::exp(-0.75 / x);
              }).statistic;
    }
    report(identical && ks0 < 0.03 && ks5 < 0.03 && empties == 0, "ladder-marginals",
           "KS(t=0) = " + fmt(ks0) + ", KS(t=0.5) = " + fmt(ks5) +
               " (< 0.03); L(0) == max sample: " + (identical ? "yes" : "no"));
}

// Criterion 8: H2 defect diagnostic. The tail-set defect decreases
// monotonically across n in {100, 1000, 10000} for the perturbed model and
// is below 1e-3 at n = 1000 for delta == 0 with constant weights.
void criterion_defect() {
    const TailModel perturbed(1.0, WeightScheme::power(1.0),
                              Perturbation::uniform_decay(0.5, 1.0));
    const double d100 = uniform_vague_defect(perturbed, 100, 1.0, 128);
    const double d1000 = uniform_vague_defect(perturbed, 1000, 1.0, 128);
    const double d10000 = uniform_vague_defect(perturbed, 10000, 1.0, 128);

    const TailModel exact(1.0, WeightScheme::constant(), Perturbation::zero());
    const double frechet_defect = uniform_vague_defect(exact, 1000, 1.0, 128);

    const bool monotone = d100 > d1000 && d1000 > d10000;
    report(monotone && frechet_defect < 1e-3, "h2-defect-diagnostic",
           "perturbed defect {" + fmt(d100) + ", " + fmt(d1000) + ", " + fmt(d10000) +
               "} strictly decreasing; exact-model defect " + fmt(frechet_defect) +
               " < 1e-3");
}

// Criterion 9: reproducibility. cmd_verify on the bundled scenario twice
// with the same seed produces byte-identical outputs and exit 0.
void criterion_reproducibility(const std::string& bin, const std::string& scenario_dir) {
    const fs::path work = fs::temp_directory_path() / "evp_acceptance_repro";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string scenario = scenario_dir + "/frechet-exact.json";
    const fs::path out1 = work / "run1", out2 = work / "run2";

    auto run_verify = [&](const fs::path& out) {
        const std::string cmd =
            bin + " verify " + scenario + " --out " + out.string() + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const int code1 = run_verify(out1);
    const int code2 = run_verify(out2);

    bool identical = code1 == 0 && code2 == 0;
    std::size_t files = 0;
    if (identical) {
        for (const auto& entry : fs::directory_iterator(out1)) {
            ++files;
            std::ifstream a(entry.path(), std::ios::binary);
            std::ifstream b(out2 / entry.path().filename(), std::ios::binary);
            std::ostringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (!b.good() || sa.str() != sb.str()) {
                identical = false;
                break;
            }
        }
        identical = identical && files > 0;
    }
    fs::remove_all(work);
    report(identical, "verify-reproducibility",
           "exit codes " + std::to_string(code1) + "/" + std::to_string(code2) +
               ", " + std::to_string(files) + " output files byte-identical");
}

} // namespace

int main(int argc, char** argv) {
    std::string bin = EVPSIM_BIN;
    std::string scenario_dir = SCENARIO_DIR;
    if (argc > 1) bin = argv[1];
    if (argc > 2) scenario_dir = argv[2];

    criterion_argmax_exact();
    criterion_max_exact();
    criterion_argmax_trend();
    criterion_poisson_argmax();
    criterion_poisson_counts();
    criterion_laplace();
    criterion_ladder();
    criterion_defect();
    criterion_reproducibility(bin, scenario_dir);

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
