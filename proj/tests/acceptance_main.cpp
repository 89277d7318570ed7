// Acceptance harness. Runs every acceptance criterion, prints one
// [PASS]/[FAIL] line each, and exits nonzero if any failed. Pass
// --cli <path-to-tdacp-binary> so the determinism criterion can shell out.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tdacp/detect.hpp"
#include "tdacp/histogram.hpp"
#include "tdacp/lower_star.hpp"
#include "tdacp/persistence.hpp"
#include "tdacp/rips.hpp"
#include "tdacp/rng.hpp"
#include "tdacp/synth.hpp"
#include "tdacp/types.hpp"

namespace fs = std::filesystem;
using namespace tdacp;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome ok(std::string detail = "") { return {true, std::move(detail)}; }
Outcome bad(std::string detail) { return {false, std::move(detail)}; }

// -- 1. persistence vs naive boundary-matrix reduction ----------------------

Outcome check_oracle_equivalence(const std::string&) {
    Rng rng(101);
    ReductionOptions keep;
    keep.drop_zero_persistence = false;
    for (int i = 0; i < 200; ++i) {
        const FilteredComplex cx = oracle::random_complex(rng, 12);
        const PersistenceDiagram got = compute_persistence(cx, keep);
        const oracle::NaiveDiagram want = oracle::naive_reduction(cx);
        if (!oracle::diagram_equal(got, want))
            return bad("complex " + std::to_string(i) + " (" + std::to_string(cx.size()) +
                       " simplices) disagrees with the naive reduction");
    }
    return ok("200 random complexes, zero-persistence pairs kept");
}

// -- 2. H0 deaths vs Euclidean MST ------------------------------------------

Outcome check_mst_duality(const std::string&) {
    Rng rng(202);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + rng.uniform_index(49);
        std::vector<std::vector<double>> pts(n, std::vector<double>(2));
        std::vector<double> flat;
        for (auto& p : pts) {
            p[0] = rng.uniform() * 10.0;
            p[1] = rng.uniform() * 10.0;
            flat.push_back(p[0]);
            flat.push_back(p[1]);
        }
        const PointCloud cloud(std::move(flat), 2);

        RipsConfig cfg;
        cfg.eps_max = cloud_diameter(cloud) + 1.0;
        cfg.max_dim = 1;
        ReductionOptions opts;
        opts.dim1 = false;
        opts.drop_zero_persistence = false;
        const PersistenceDiagram d = compute_persistence(build_rips(cloud, cfg), opts);

        std::vector<double> deaths;
        for (const auto& p : d.finite)
            if (p.dim == 0) deaths.push_back(p.birth + p.persistence);
        std::sort(deaths.begin(), deaths.end());

        const std::vector<double> mst = oracle::mst_weights(pts, cfg.eps_max);
        if (deaths.size() != mst.size())
            return bad("cloud " + std::to_string(i) + ": " + std::to_string(deaths.size()) +
                       " deaths vs " + std::to_string(mst.size()) + " MST edges");
        for (std::size_t j = 0; j < mst.size(); ++j)
            if (std::abs(deaths[j] - mst[j]) > 1e-9)
                return bad("cloud " + std::to_string(i) + ": death " + std::to_string(deaths[j]) +
                           " vs MST weight " + std::to_string(mst[j]));
    }
    return ok("100 random planar clouds, n <= 50");
}

// -- 3. lower-star counts, Euler characteristic, shift covariance -----------

Outcome check_lower_star_invariants(const std::string&) {
    Rng rng(303);
    for (int i = 0; i < 40; ++i) {
        const std::size_t r = 1 + rng.uniform_index(20);
        const std::size_t c = r == 1 ? 2 + rng.uniform_index(19) : 1 + rng.uniform_index(20);
        std::vector<double> values;
        for (std::size_t j = 0; j < r * c; ++j) values.push_back(rng.uniform() * 4.0 - 2.0);
        const ScalarGrid grid(r, c, values);
        const FilteredComplex cx = build_lower_star(grid);

        if (auto why = validate(cx)) return bad("grid " + std::to_string(i) + ": " + *why);

        std::size_t nv = 0, ne = 0, nt = 0;
        for (const auto& s : cx.simplices) {
            if (s.dim() == 0) ++nv;
            else if (s.dim() == 1) ++ne;
            else ++nt;
            double vmax = -std::numeric_limits<double>::infinity();
            for (std::uint8_t k = 0; k < s.nverts; ++k)
                vmax = std::max(vmax, values[s.v[k]]);
            if (s.value != vmax)
                return bad("grid " + std::to_string(i) + ": simplex value is not the vertex max");
        }
        const std::size_t want_e = r * (c - 1) + c * (r - 1) + (r - 1) * (c - 1);
        const std::size_t want_t = 2 * (r - 1) * (c - 1);
        if (nv != r * c || ne != want_e || nt != want_t)
            return bad("grid " + std::to_string(i) + ": counts " + std::to_string(nv) + "/" +
                       std::to_string(ne) + "/" + std::to_string(nt));
        if (nv - ne + nt != 1)
            return bad("grid " + std::to_string(i) + ": Euler characteristic != 1");

        const double shift = rng.uniform() * 10.0 - 5.0;
        std::vector<double> shifted(values);
        for (double& v : shifted) v += shift;
        const FilteredComplex cx2 = build_lower_star(ScalarGrid(r, c, shifted));
        if (cx2.size() != cx.size()) return bad("grid " + std::to_string(i) + ": size changed");
        for (std::size_t j = 0; j < cx.size(); ++j) {
            const auto& a = cx.simplices[j];
            const auto& b = cx2.simplices[j];
            if (a.nverts != b.nverts || a.v != b.v)
                return bad("grid " + std::to_string(i) + ": simplex order changed under shift");
            if (std::abs(b.value - (a.value + shift)) > 1e-12)
                return bad("grid " + std::to_string(i) + ": simplex value not shift-covariant");
        }

        const PersistenceDiagram d = compute_persistence(cx);
        const PersistenceDiagram d2 = compute_persistence(cx2);
        if (d.finite.size() != d2.finite.size())
            return bad("grid " + std::to_string(i) + ": diagram size changed under shift");
        for (std::size_t j = 0; j < d.finite.size(); ++j) {
            if (std::abs(d2.finite[j].birth - (d.finite[j].birth + shift)) > 1e-12 ||
                std::abs(d2.finite[j].persistence - d.finite[j].persistence) > 1e-12)
                return bad("grid " + std::to_string(i) + ": diagram not shift-covariant");
        }
        for (int dim = 0; dim < 2; ++dim) {
            if (d.infinite[dim].size() != d2.infinite[dim].size())
                return bad("grid " + std::to_string(i) + ": immortal count changed under shift");
            for (std::size_t j = 0; j < d.infinite[dim].size(); ++j)
                if (std::abs(d2.infinite[dim][j] - (d.infinite[dim][j] + shift)) > 1e-12)
                    return bad("grid " + std::to_string(i) + ": immortal birth not shifted");
        }
    }
    return ok("40 random grids up to 20x20");
}

// -- 4. stability spot-check on 1xN grids -----------------------------------

Outcome check_stability(const std::string&) {
    Rng rng(404);
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 2 + rng.uniform_index(7);
        std::vector<double> f, g;
        double sup = 0.0;
        const double delta = 0.005 + 0.095 * rng.uniform();
        for (std::size_t j = 0; j < n; ++j) {
            const double v = rng.uniform() * 2.0;
            const double e = (rng.uniform() * 2.0 - 1.0) * delta;
            f.push_back(v);
            g.push_back(v + e);
            sup = std::max(sup, std::abs(e));
        }
        const PersistenceDiagram df = compute_persistence(build_lower_star(ScalarGrid(1, n, f)));
        const PersistenceDiagram dg = compute_persistence(build_lower_star(ScalarGrid(1, n, g)));
        const double bd = oracle::bottleneck_distance(df, dg, 0);
        if (bd > sup + 1e-9)
            return bad("grid " + std::to_string(i) + ": bottleneck " + std::to_string(bd) +
                       " exceeds perturbation sup-norm " + std::to_string(sup));
        if (sup > 0) worst_ratio = std::max(worst_ratio, bd / sup);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst bottleneck/sup-norm ratio %.3f", worst_ratio);
    return ok(buf);
}

// -- 5. scan statistic vs brute-force re-scan -------------------------------

Outcome check_scan_correctness(const std::string&) {
    Rng rng(505);
    const std::size_t windows[3] = {1, 2, 5};
    for (int s = 0; s < 50; ++s) {
        const std::size_t m = 2 + rng.uniform_index(4);
        const std::size_t len = 40 + rng.uniform_index(161);
        const std::size_t w = windows[s % 3];
        const bool pool = s % 5 == 0;

        std::vector<double> sigma;
        for (std::size_t j = 0; j < m; ++j) sigma.push_back(0.25 + 2.0 * rng.uniform());

        auto random_profile = [&] {
            std::vector<double> p;
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                p.push_back(0.05 + rng.uniform());
                sum += p.back();
            }
            for (double& x : p) x /= sum;
            return p;
        };
        const std::vector<double> pre = random_profile();
        const std::vector<double> post = random_profile();
        const std::size_t change = len / 2;

        std::vector<EmpiricalDistribution> stream;
        for (std::size_t t = 0; t < len; ++t) {
            const auto& base = t < change ? pre : post;
            EmpiricalDistribution dist;
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                dist.mass.push_back(std::max(1e-4, base[j] + 0.05 * rng.normal()));
                sum += dist.mass.back();
            }
            for (double& x : dist.mass) x /= sum;
            dist.total_persistence = 0.5 + 5.0 * rng.uniform();
            stream.push_back(std::move(dist));
        }

        DetectorConfig cfg;
        cfg.window = w;
        cfg.lookback = std::nullopt;
        cfg.threshold = std::numeric_limits<double>::infinity();
        cfg.sigma = sigma;
        cfg.pool_raw_mass = pool;

        Detector det(cfg);
        double max_chi = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            const StepResult r = det.step(stream[t]);
            const oracle::ScanValue o = oracle::brute_scan(
                stream, static_cast<std::int64_t>(t), w, cfg.lookback, sigma, pool);
            if (r.chi_max.has_value() != o.chi_max.has_value() ||
                (r.chi_max && *r.chi_max != *o.chi_max) || r.k_hat != o.k_hat)
                return bad("stream " + std::to_string(s) + " t " + std::to_string(t) +
                           ": step disagrees with brute-force re-scan");
            if (r.chi_max) max_chi = std::max(max_chi, *r.chi_max);
        }

        // alarmed_at must be non-decreasing in the threshold.
        constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();
        std::int64_t prev = -1;
        for (int j = 0; j < 10; ++j) {
            DetectorConfig c2 = cfg;
            c2.threshold = (max_chi + 1.0) * j / 9.0;
            Detector d2(c2);
            for (const auto& dist : stream) d2.step(dist);
            const std::int64_t at = d2.alarmed_at().value_or(kNever);
            if (at < prev)
                return bad("stream " + std::to_string(s) +
                           ": alarmed_at not monotone in the threshold");
            prev = at;
        }
    }
    return ok("50 random streams, exact match at every t");
}

// -- 6. synthetic end-to-end detection --------------------------------------

Outcome check_end_to_end(const std::string&) {
    int control_alarms = 0;
    int change_hits = 0;
    std::int64_t worst_delay = -1;
    std::vector<std::string> notes;

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GridStreamParams change_params;  // 32x32, T=120, change at 60, amp 1->2
        change_params.seed = seed;
        GridStreamParams control_params = change_params;
        control_params.post_blob_amp = control_params.pre_blob_amp;

        auto diagrams_of = [](const std::vector<ScalarGrid>& stream) {
            ReductionOptions opts;
            opts.dim1 = false;
            std::vector<PersistenceDiagram> out;
            out.reserve(stream.size());
            for (std::size_t t = 0; t < stream.size(); ++t) {
                PersistenceDiagram d = compute_persistence(build_lower_star(stream[t]), opts);
                d.frame_index = static_cast<std::int64_t>(t);
                out.push_back(std::move(d));
            }
            return out;
        };
        const auto change_diagrams = diagrams_of(gen_grid_stream(change_params));
        const auto control_diagrams = diagrams_of(gen_grid_stream(control_params));

        const std::vector<PersistenceDiagram> train_prefix(change_diagrams.begin(),
                                                           change_diagrams.begin() + 40);
        const HistogramModel model = train_breakpoints(train_prefix, 10, 0);

        auto bin_all = [&](const std::vector<PersistenceDiagram>& ds) {
            std::vector<EmpiricalDistribution> out;
            out.reserve(ds.size());
            for (const auto& d : ds) out.push_back(bin_diagram(d, model));
            return out;
        };
        const auto change_dists = bin_all(change_diagrams);
        const auto control_dists = bin_all(control_diagrams);

        DetectorConfig cfg;
        cfg.window = 5;
        cfg.lookback = 40;
        cfg.sigma = model.sigma;
        const std::vector<EmpiricalDistribution> pre(change_dists.begin(),
                                                     change_dists.begin() + 40);
        cfg.threshold = calibrate_threshold(pre, cfg, 0.05, 120, 200, seed);

        auto run = [&](const std::vector<EmpiricalDistribution>& dists) {
            Detector det(cfg);
            for (const auto& d : dists) det.step(d);
            return det.alarmed_at();
        };

        if (run(control_dists)) ++control_alarms;
        if (const auto at = run(change_dists)) {
            const std::int64_t delay = *at - 60;
            if (*at >= 60 && delay <= 10) {
                ++change_hits;
                worst_delay = std::max(worst_delay, delay);
            } else {
                notes.push_back("seed " + std::to_string(seed) + " alarm at " +
                                std::to_string(*at));
            }
        } else {
            notes.push_back("seed " + std::to_string(seed) + " missed");
        }
    }

    std::string detail = "control " + std::to_string(control_alarms) + "/20 alarms, change " +
                         std::to_string(change_hits) + "/20 detected, worst delay " +
                         std::to_string(worst_delay);
    for (const auto& n : notes) detail += "; " + n;
    if (control_alarms > 2 || change_hits < 18) return bad(detail);
    return ok(detail);
}

// -- 7. 300-frame 232x292 throughput ----------------------------------------

Outcome check_performance(const std::string&) {
    GridStreamParams p;
    p.rows = 232;
    p.cols = 292;
    p.frames = 300;
    p.change_at = 150;
    p.seed = 7;
    GridStreamGenerator gen(p);

    using clock = std::chrono::steady_clock;
    double total = 0.0, worst = 0.0;
    std::size_t pairs = 0;
    for (int t = 0; t < 300; ++t) {
        const ScalarGrid grid = gen.next();
        const auto t0 = clock::now();
        const PersistenceDiagram d = compute_persistence(build_lower_star(grid));
        const double dt = std::chrono::duration<double>(clock::now() - t0).count();
        total += dt;
        worst = std::max(worst, dt);
        pairs += d.finite.size();
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%.1f s total, %.0f ms/frame mean, %.0f ms worst, %zu pairs", total,
                  1e3 * total / 300, 1e3 * worst, pairs);
    if (total > 90.0) return bad(std::string(buf) + "; exceeds the 90 s wall");
    if (worst > 0.3) return bad(std::string(buf) + "; a frame exceeded 300 ms");
    return ok(buf);
}

// -- 8. cli determinism ------------------------------------------------------

Outcome check_cli_determinism(const std::string& cli) {
    if (cli.empty()) return bad("no --cli path given");

    std::string tmpl = (fs::temp_directory_path() / "tdacp-accept-XXXXXX").string();
    std::vector<char> dirbuf(tmpl.begin(), tmpl.end());
    dirbuf.push_back('\0');
    if (!mkdtemp(dirbuf.data())) return bad("cannot create a temp directory");
    const fs::path root(dirbuf.data());

    auto shell = [&](const std::string& args) {
        const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    Outcome result = ok("three runs byte-identical (1 and 2 worker threads)");
    const fs::path frames = root / "frames";
    if (shell("simulate --scenario grid --out \"" + frames.string() +
              "\" --rows 12 --cols 12 --frames 4 --change-at 2 --seed 3") != 0) {
        result = bad("simulate failed");
    } else {
        const std::string base = "diagram \"" + frames.string() +
                                 "\" --format pgm-grid --mode lower-star --out \"";
        if (shell(base + (root / "a.jsonl").string() + "\"") != 0 ||
            shell(base + (root / "b.jsonl").string() + "\"") != 0 ||
            std::system(("TDACP_THREADS=2 \"" + cli + "\" " + base +
                         (root / "c.jsonl").string() + "\" > /dev/null 2>&1")
                            .c_str()) != 0) {
            result = bad("diagram run failed");
        } else {
            const std::string a = slurp(root / "a.jsonl");
            if (a.empty() || a != slurp(root / "b.jsonl"))
                result = bad("two serial runs differ");
            else if (a != slurp(root / "c.jsonl"))
                result = bad("threaded run differs from serial");
        }
    }
    fs::remove_all(root);
    return result;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--cli" && i + 1 < argc) cli = argv[++i];
    }

    struct Entry {
        const char* name;
        double limit_s;  // 0 = no stated limit
        Outcome (*fn)(const std::string&);
    };
    const Entry entries[] = {
        {"persistence matches naive boundary reduction", 30.0, check_oracle_equivalence},
        {"dim-0 deaths equal Euclidean MST weights", 10.0, check_mst_duality},
        {"lower-star counts, Euler, shift covariance", 0.0, check_lower_star_invariants},
        {"1xN stability: bottleneck within sup-norm", 0.0, check_stability},
        {"scan statistic matches brute-force re-scan", 0.0, check_scan_correctness},
        {"synthetic end-to-end detection rates", 120.0, check_end_to_end},
        {"300-frame 232x292 processing throughput", 0.0, check_performance},
        {"cli diagram byte-identical across runs", 0.0, check_cli_determinism},
    };

    int failures = 0;
    for (const auto& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = e.fn(cli);
        } catch (const std::exception& ex) {
            outcome = bad(std::string("unexpected exception: ") + ex.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (outcome.pass && e.limit_s > 0.0 && elapsed > e.limit_s) {
            outcome = bad("exceeded the " + std::to_string(static_cast<int>(e.limit_s)) +
                          " s budget");
        }
        std::printf("[%s] %s%s%s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", e.name,
                    outcome.detail.empty() ? "" : ": ", outcome.detail.c_str(), elapsed);
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
