// tdacp: persistence-diagram change-point pipeline.
//
// Subcommands:
//   diagram   point clouds / scalar grids -> diagram records
//   train     diagram records -> histogram model
//   detect    diagram records + model -> trace CSV + summary
//   simulate  synthetic scenario -> frame files
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 model mismatch.

#include "tdacp/detect.hpp"
#include "tdacp/histogram.hpp"
#include "tdacp/io.hpp"
#include "tdacp/lower_star.hpp"
#include "tdacp/persistence.hpp"
#include "tdacp/rips.hpp"
#include "tdacp/synth.hpp"
#include "tdacp/types.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace tdacp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
    throw CliError{code, message};
}

std::ifstream open_input(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) fail(kExitData, "cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) fail(kExitData, "cannot open " + path + " for writing");
    return out;
}

// Input frames in lexicographic filename order; a single file is one frame.
std::vector<fs::path> collect_frames(const std::string& input) {
    fs::path p(input);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
        std::vector<fs::path> frames;
        for (const auto& entry : fs::directory_iterator(p)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (!name.empty() && name[0] == '.') continue;
            frames.push_back(entry.path());
        }
        std::sort(frames.begin(), frames.end(),
                  [](const fs::path& a, const fs::path& b) {
                      return a.filename().string() < b.filename().string();
                  });
        if (frames.empty()) fail(kExitData, "no frames in " + input);
        return frames;
    }
    if (!fs::exists(p, ec)) fail(kExitData, "no such input " + input);
    return {p};
}

std::size_t thread_count(std::size_t n_frames) {
    std::size_t n = 1;
    if (const char* env = std::getenv("TDACP_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || parsed < 1)
            fail(kExitUsage, "TDACP_THREADS must be a positive integer");
        n = static_cast<std::size_t>(parsed);
    }
    return std::min(n, n_frames == 0 ? std::size_t{1} : n_frames);
}

ReductionOptions parse_dims(const std::string& dims) {
    ReductionOptions opts;
    opts.dim0 = opts.dim1 = false;
    std::stringstream ss(dims);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "0") opts.dim0 = true;
        else if (tok == "1") opts.dim1 = true;
        else fail(kExitUsage, "--dims accepts 0, 1, or 0,1");
    }
    if (!opts.dim0 && !opts.dim1) fail(kExitUsage, "--dims accepts 0, 1, or 0,1");
    return opts;
}

// ---------------------------------------------------------------- diagram --

struct DiagramArgs {
    std::string input;
    std::string format;  // csv-points | pgm-grid
    std::string mode;    // rips | lower-star
    std::string out;
    std::string dims = "0,1";
    double eps_max = 0.0;
    int max_dim = 2;
};

std::string diagram_one_frame(const fs::path& path, const DiagramArgs& args,
                              const ReductionOptions& opts, std::int64_t frame_index) {
    FilteredComplex complex;
    if (args.format == "csv-points") {
        auto in = open_input(path.string());
        const PointCloud cloud = read_points_csv(in);
        RipsConfig cfg;
        cfg.eps_max = args.eps_max;
        cfg.max_dim = args.max_dim;
        complex = build_rips(cloud, cfg);
    } else {
        auto in = open_input(path.string(), true);
        const ScalarGrid grid = read_pgm(in);
        complex = build_lower_star(grid);
    }
    PersistenceDiagram diagram = compute_persistence(complex, opts);
    diagram.frame_index = frame_index;
    return diagram_record_line(diagram);
}

int cmd_diagram(const DiagramArgs& args) {
    if (args.mode == "rips" && args.format != "csv-points")
        fail(kExitUsage, "mode rips requires --format csv-points");
    if (args.mode == "lower-star" && args.format != "pgm-grid")
        fail(kExitUsage, "mode lower-star requires --format pgm-grid");
    if (args.mode == "rips" && !(args.eps_max > 0.0))
        fail(kExitUsage, "mode rips requires --eps-max > 0");

    const ReductionOptions opts = parse_dims(args.dims);
    const std::vector<fs::path> frames = collect_frames(args.input);

    std::vector<std::string> lines(frames.size());
    std::vector<std::string> errors(frames.size());
    const std::size_t n_threads = thread_count(frames.size());

    auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < frames.size(); i += stride) {
            try {
                lines[i] = diagram_one_frame(frames[i], args, opts,
                                             static_cast<std::int64_t>(i));
            } catch (const CliError& e) {
                errors[i] = e.message;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    if (n_threads <= 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t th = 0; th < n_threads; ++th)
            pool.emplace_back(run_range, th, n_threads);
        for (auto& th : pool) th.join();
    }

    bool failed = false;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (errors[i].empty()) continue;
        std::cerr << "error: frame " << i << " (" << frames[i].string()
                  << "): " << errors[i] << "\n";
        failed = true;
    }
    if (failed) return kExitData;

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file = open_output(args.out);
        out = &file;
    }
    for (const auto& line : lines) *out << line << "\n";
    out->flush();
    if (!*out) fail(kExitData, "write failed");
    return 0;
}

// ------------------------------------------------------------------ train --

struct TrainArgs {
    std::string diagrams;
    std::string out;
    std::size_t bins = 10;
    std::size_t train_prefix = 1;
    int dim = 0;
    std::string sigma = "identity";  // identity | invvar
};

int cmd_train(const TrainArgs& args) {
    if (args.dim != 0 && args.dim != 1) fail(kExitUsage, "--dim must be 0 or 1");
    if (args.bins < 2) fail(kExitUsage, "--bins must be >= 2");
    if (args.sigma != "identity" && args.sigma != "invvar")
        fail(kExitUsage, "--sigma must be identity or invvar");
    if (args.train_prefix < 1) fail(kExitUsage, "--train-prefix must be >= 1");

    auto in = open_input(args.diagrams);
    std::vector<PersistenceDiagram> diagrams = read_diagram_records(in);
    if (diagrams.size() < args.train_prefix)
        fail(kExitData, "training prefix exceeds available frames (" +
                            std::to_string(diagrams.size()) + ")");
    diagrams.resize(args.train_prefix);

    HistogramModel model = train_breakpoints(diagrams, args.bins, args.dim);
    model.training_frames = diagrams.size();

    if (args.sigma == "invvar") {
        std::vector<EmpiricalDistribution> dists;
        dists.reserve(diagrams.size());
        for (const auto& d : diagrams) dists.push_back(bin_diagram(d, model));
        model.sigma = sigma_inverse_variance(dists);
    }

    const std::string text = model_to_json(model);
    if (args.out.empty()) {
        std::cout << text;
    } else {
        auto out = open_output(args.out);
        out << text;
        out.flush();
        if (!out) fail(kExitData, "write failed");
    }
    return 0;
}

// ----------------------------------------------------------------- detect --

struct DetectArgs {
    std::string diagrams;
    std::string model;
    std::string out;
    std::size_t window = 0;
    std::string lookback;   // integer or "inf"; empty = default 8w
    std::string threshold;  // real or "inf"
    double alpha = -1.0;    // set => calibrate
    std::size_t horizon = 0;
    std::size_t replicates = 200;
    std::uint64_t seed = 0;
    std::size_t calib_prefix = 0;  // 0 = default max(4w, model.training_frames)
    bool pool_raw_mass = false;
};

double parse_threshold(const std::string& text) {
    if (text == "inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double b = std::stod(text, &used);
        if (used != text.size() || std::isnan(b) || b < 0.0) throw std::invalid_argument("");
        return b;
    } catch (const std::exception&) {
        fail(kExitUsage, "--threshold must be a nonnegative real or inf");
    }
}

std::optional<std::size_t> parse_lookback(const std::string& text, std::size_t window) {
    if (text.empty()) return 8 * window;
    if (text == "inf" || text == "infinity") return std::nullopt;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size() || v < 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        fail(kExitUsage, "--lookback must be a nonnegative integer or inf");
    }
}

HistogramModel load_model(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return model_from_json(buf.str());
    } catch (const std::exception& e) {
        fail(kExitModel, std::string(e.what()));
    }
}

int cmd_detect(const DetectArgs& args) {
    const bool calibrate = args.alpha >= 0.0;
    if (calibrate == !args.threshold.empty())
        fail(kExitUsage, "exactly one of --threshold and --calibrate is required");
    if (calibrate && (args.alpha <= 0.0 || args.alpha > 1.0))
        fail(kExitUsage, "--calibrate level must lie in (0, 1]");
    if (calibrate && args.horizon == 0)
        fail(kExitUsage, "--calibrate requires --horizon");
    if (args.window < 1) fail(kExitUsage, "--window must be >= 1");

    const HistogramModel model = load_model(args.model);

    auto in = open_input(args.diagrams);
    std::vector<PersistenceDiagram> diagrams;
    try {
        diagrams = read_diagram_records(in);
    } catch (const std::exception& e) {
        fail(kExitData, std::string(e.what()));
    }

    std::vector<EmpiricalDistribution> dists;
    dists.reserve(diagrams.size());
    for (const auto& d : diagrams) dists.push_back(bin_diagram(d, model));

    DetectorConfig cfg;
    cfg.window = args.window;
    cfg.lookback = parse_lookback(args.lookback, args.window);
    cfg.sigma = model.sigma;
    cfg.pool_raw_mass = args.pool_raw_mass;
    if (cfg.lookback && *cfg.lookback < 4 * cfg.window)
        fail(kExitUsage, "--lookback must be at least 4 * window");

    if (calibrate) {
        std::size_t prefix = args.calib_prefix;
        if (prefix == 0) prefix = std::max<std::size_t>(4 * args.window, model.training_frames);
        if (prefix > dists.size())
            fail(kExitData, "calibration prefix exceeds available frames (" +
                                std::to_string(dists.size()) + ")");
        const std::vector<EmpiricalDistribution> pre(dists.begin(),
                                                     dists.begin() + prefix);
        try {
            cfg.threshold = calibrate_threshold(pre, cfg, args.alpha, args.horizon,
                                                args.replicates, args.seed);
        } catch (const std::exception& e) {
            fail(kExitData, std::string(e.what()));
        }
    } else {
        cfg.threshold = parse_threshold(args.threshold);
    }

    Detector detector(cfg);

    std::ostream* trace = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file = open_output(args.out);
        trace = &file;
    }

    *trace << "t,chi_max,k_hat,alarm,alarmed_at\n";
    for (const auto& dist : dists) {
        StepResult r;
        try {
            r = detector.step(dist);
        } catch (const std::exception& e) {
            fail(kExitModel, std::string(e.what()));
        }
        *trace << r.t << ',';
        if (r.chi_max) *trace << format_double(*r.chi_max);
        *trace << ',';
        if (r.k_hat) *trace << *r.k_hat;
        *trace << ',' << (r.alarm ? 1 : 0) << ',';
        if (detector.alarmed_at()) *trace << *detector.alarmed_at();
        *trace << '\n';
    }
    trace->flush();
    if (!*trace) fail(kExitData, "write failed");

    std::cout << "threshold=" << format_double(cfg.threshold);
    if (detector.alarmed_at()) {
        std::cout << " alarmed_at=" << *detector.alarmed_at();
        if (detector.last_k_hat()) std::cout << " k_hat=" << *detector.last_k_hat();
    } else {
        std::cout << " alarmed_at=none";
    }
    std::cout << "\n";
    return 0;
}

// --------------------------------------------------------------- simulate --

struct SimulateArgs {
    std::string scenario;  // grid | circles
    std::string out_dir;
    std::uint64_t seed = 0;
    // grid
    std::size_t rows = 32, cols = 32, frames = 120, change_at = 60, blobs = 3;
    double pre_amp = 1.0, post_amp = 2.0, noise_sd = 0.05;
    // circles
    std::size_t points = 60;
    std::string centers = "0,0";
    double radius = 1.0;
    std::size_t cloud_frames = 1;
};

std::string frame_name(std::size_t i, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04zu.%s", i, ext);
    return buf;
}

int cmd_simulate(const SimulateArgs& args) {
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) fail(kExitData, "cannot create " + args.out_dir);

    if (args.scenario == "grid") {
        GridStreamParams params;
        params.rows = args.rows;
        params.cols = args.cols;
        params.frames = args.frames;
        params.change_at = args.change_at;
        params.pre_blob_amp = args.pre_amp;
        params.post_blob_amp = args.post_amp;
        params.noise_sd = args.noise_sd;
        params.n_blobs = args.blobs;
        params.seed = args.seed;

        std::vector<ScalarGrid> stream;
        try {
            stream = gen_grid_stream(params);
        } catch (const std::exception& e) {
            fail(kExitUsage, std::string(e.what()));
        }

        // One affine map for the whole stream so every frame is quantized on
        // the same scale.
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& g : stream)
            for (double v : g.values()) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

        for (std::size_t i = 0; i < stream.size(); ++i) {
            std::vector<double> scaled(stream[i].values());
            for (double& v : scaled) v = (v - lo) * scale;
            ScalarGrid g(stream[i].rows(), stream[i].cols(), std::move(scaled));
            auto out = open_output((fs::path(args.out_dir) / frame_name(i, "pgm")).string(), true);
            write_pgm_p5(out, g);
        }
        return 0;
    }

    if (args.scenario == "circles") {
        std::vector<std::array<double, 2>> centers;
        std::stringstream ss(args.centers);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            double x = 0, y = 0;
            if (std::sscanf(tok.c_str(), "%lf,%lf", &x, &y) != 2)
                fail(kExitUsage, "--centers must look like \"x,y;x,y\"");
            centers.push_back({x, y});
        }
        for (std::size_t i = 0; i < args.cloud_frames; ++i) {
            PointCloud cloud = sample_circles(args.points, centers, args.radius,
                                              args.noise_sd, args.seed + i);
            auto out = open_output((fs::path(args.out_dir) / frame_name(i, "csv")).string());
            write_points_csv(out, cloud);
        }
        return 0;
    }

    fail(kExitUsage, "unknown scenario " + args.scenario);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistence-diagram change-point detection pipeline"};
    app.require_subcommand(1);

    DiagramArgs da;
    auto* diagram = app.add_subcommand("diagram", "Compute persistence diagrams per frame");
    diagram->add_option("input", da.input, "Input file or directory of frames")->required();
    diagram->add_option("--format", da.format, "Input format")
        ->required()
        ->check(CLI::IsMember({"csv-points", "pgm-grid"}));
    diagram->add_option("--mode", da.mode, "Filtration mode")
        ->required()
        ->check(CLI::IsMember({"rips", "lower-star"}));
    diagram->add_option("--eps-max", da.eps_max, "Rips scale truncation");
    diagram->add_option("--max-dim", da.max_dim, "Top simplex dimension for rips")
        ->check(CLI::Range(1, 2));
    diagram->add_option("--dims", da.dims, "Homology dimensions to compute (default 0,1)");
    diagram->add_option("--out", da.out, "Output path (default stdout)");

    TrainArgs ta;
    auto* train = app.add_subcommand("train", "Train a histogram model from diagrams");
    train->add_option("diagrams", ta.diagrams, "Diagram records file")->required();
    train->add_option("--bins", ta.bins, "Histogram bin count (default 10)");
    train->add_option("--train-prefix", ta.train_prefix, "Training frames (default 1)");
    train->add_option("--dim", ta.dim, "Homology dimension to bin (default 0)");
    train->add_option("--sigma", ta.sigma, "Weight scheme: identity or invvar");
    train->add_option("--out", ta.out, "Model output path (default stdout)");

    DetectArgs dt;
    auto* detect = app.add_subcommand("detect", "Run the online scan detector");
    detect->add_option("diagrams", dt.diagrams, "Diagram records file")->required();
    detect->add_option("model", dt.model, "Histogram model file")->required();
    detect->add_option("--window", dt.window, "Interval length w")->required();
    detect->add_option("--lookback", dt.lookback, "Candidate age cap (integer or inf, default 8w)");
    detect->add_option("--threshold", dt.threshold, "Alarm threshold (real or inf)");
    detect->add_option("--calibrate", dt.alpha, "Calibrate threshold at this false-alarm level");
    detect->add_option("--horizon", dt.horizon, "Calibration stream length");
    detect->add_option("--replicates", dt.replicates, "Bootstrap replicates (default 200)");
    detect->add_option("--seed", dt.seed, "Calibration RNG seed");
    detect->add_option("--calib-prefix", dt.calib_prefix,
                       "Frames treated as pre-change for calibration "
                       "(default max(4w, model training frames))");
    detect->add_flag("--pool-raw-mass", dt.pool_raw_mass,
                     "Pool raw persistence mass across interval frames");
    detect->add_option("--out", dt.out, "Trace CSV path (default stdout)");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario");
    simulate->add_option("--scenario", sa.scenario, "grid or circles")->required();
    simulate->add_option("--out", sa.out_dir, "Output directory")->required();
    simulate->add_option("--seed", sa.seed, "RNG seed");
    simulate->add_option("--rows", sa.rows, "Grid rows");
    simulate->add_option("--cols", sa.cols, "Grid cols");
    simulate->add_option("--frames", sa.frames, "Stream length");
    simulate->add_option("--change-at", sa.change_at, "First post-change frame");
    simulate->add_option("--pre-amp", sa.pre_amp, "Pre-change blob amplitude");
    simulate->add_option("--post-amp", sa.post_amp, "Post-change blob amplitude");
    simulate->add_option("--noise-sd", sa.noise_sd, "Pixel noise standard deviation");
    simulate->add_option("--blobs", sa.blobs, "Number of blobs");
    simulate->add_option("--points", sa.points, "Points per cloud (circles)");
    simulate->add_option("--centers", sa.centers, "Circle centers \"x,y;x,y\"");
    simulate->add_option("--radius", sa.radius, "Circle radius");
    simulate->add_option("--cloud-frames", sa.cloud_frames, "Clouds to emit (circles)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (diagram->parsed()) return cmd_diagram(da);
        if (train->parsed()) return cmd_train(ta);
        if (detect->parsed()) return cmd_detect(dt);
        if (simulate->parsed()) return cmd_simulate(sa);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
