#include "tdacp/detect.hpp"
#include "tdacp/histogram.hpp"
#include "tdacp/io.hpp"
#include "tdacp/lower_star.hpp"
#include "tdacp/persistence.hpp"
#include "tdacp/rips.hpp"
#include "tdacp/synth.hpp"
#include "tdacp/types.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <sstream>
#include <vector>

namespace py = pybind11;
using namespace tdacp;

namespace {

PointCloud cloud_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected an (n, d) array");
    const std::size_t n = arr.shape(0), d = arr.shape(1);
    std::vector<double> coords(arr.data(), arr.data() + n * d);
    return PointCloud(std::move(coords), d);
}

ScalarGrid grid_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected an (rows, cols) array");
    const std::size_t r = arr.shape(0), c = arr.shape(1);
    std::vector<double> values(arr.data(), arr.data() + r * c);
    return ScalarGrid(r, c, std::move(values));
}

py::array_t<double> grid_to_array(const ScalarGrid& grid) {
    py::array_t<double> out({grid.rows(), grid.cols()});
    std::memcpy(out.mutable_data(), grid.values().data(),
                grid.values().size() * sizeof(double));
    return out;
}

py::array_t<double> pairs_to_array(const PersistenceDiagram& d, int dim) {
    std::vector<double> flat;
    for (const auto& p : d.finite)
        if (p.dim == dim) {
            flat.push_back(p.birth);
            flat.push_back(p.persistence);
        }
    py::array_t<double> out({flat.size() / 2, std::size_t{2}});
    std::memcpy(out.mutable_data(), flat.data(), flat.size() * sizeof(double));
    return out;
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

std::vector<double> vector_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    return {arr.data(), arr.data() + arr.shape(0)};
}

DetectorConfig make_config(std::size_t window, std::optional<std::size_t> lookback,
                           double threshold, const py::array_t<double>& sigma,
                           bool pool_raw_mass) {
    DetectorConfig cfg;
    cfg.window = window;
    cfg.lookback = lookback;
    cfg.threshold = threshold;
    cfg.sigma = vector_from_array(sigma);
    cfg.pool_raw_mass = pool_raw_mass;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Persistence-diagram change-point detection core";

    py::class_<FilteredComplex>(m, "FilteredComplex")
        .def("__len__", [](const FilteredComplex& c) { return c.simplices.size(); })
        .def("simplices", [](const FilteredComplex& c) {
            py::list out;
            for (const auto& s : c.simplices) {
                py::tuple verts(s.nverts);
                for (int i = 0; i < s.nverts; ++i) verts[i] = s.v[i];
                out.append(py::make_tuple(verts, s.value));
            }
            return out;
        });

    py::class_<PersistenceDiagram>(m, "PersistenceDiagram")
        .def_readwrite("frame_index", &PersistenceDiagram::frame_index)
        .def("pairs", &pairs_to_array, py::arg("dim"),
             "Finite (birth, persistence) pairs of one dimension as an (n, 2) array")
        .def("infinite_births",
             [](const PersistenceDiagram& d, int dim) {
                 return vector_to_array(d.infinite.at(dim));
             },
             py::arg("dim"))
        .def("to_json_line", &diagram_record_line);

    py::class_<HistogramModel>(m, "HistogramModel")
        .def_readonly("bins", &HistogramModel::bins)
        .def_readonly("trained_dim", &HistogramModel::trained_dim)
        .def_readonly("training_frames", &HistogramModel::training_frames)
        .def_property_readonly("interior_breakpoints",
                               [](const HistogramModel& m_) {
                                   return vector_to_array(m_.interior_breakpoints);
                               })
        .def_property_readonly("sigma",
                               [](const HistogramModel& m_) { return vector_to_array(m_.sigma); })
        .def("bin_of", &HistogramModel::bin_of, py::arg("birth"))
        .def("to_json", &model_to_json)
        .def_static("from_json", &model_from_json, py::arg("text"));

    py::class_<EmpiricalDistribution>(m, "EmpiricalDistribution")
        .def(py::init([](const py::array_t<double>& mass, double total_persistence) {
                 EmpiricalDistribution d;
                 d.mass = vector_from_array(mass);
                 d.total_persistence = total_persistence;
                 return d;
             }),
             py::arg("mass"), py::arg("total_persistence") = 1.0)
        .def_property_readonly("mass",
                               [](const EmpiricalDistribution& d) {
                                   return vector_to_array(d.mass);
                               })
        .def_readonly("total_persistence", &EmpiricalDistribution::total_persistence)
        .def("__len__", &EmpiricalDistribution::size);

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("t", &StepResult::t)
        .def_readonly("chi_max", &StepResult::chi_max)
        .def_readonly("k_hat", &StepResult::k_hat)
        .def_readonly("alarm", &StepResult::alarm);

    py::class_<Detector>(m, "Detector")
        .def(py::init([](std::size_t window, std::optional<std::size_t> lookback,
                         double threshold, const py::array_t<double>& sigma,
                         bool pool_raw_mass) {
                 return Detector(make_config(window, lookback, threshold, sigma,
                                             pool_raw_mass));
             }),
             py::arg("window"), py::arg("lookback"), py::arg("threshold"),
             py::arg("sigma"), py::arg("pool_raw_mass") = false)
        .def("step", &Detector::step, py::arg("dist"))
        .def_property_readonly("alarmed_at", &Detector::alarmed_at)
        .def_property_readonly("frames_seen", &Detector::frames_seen);

    m.def("build_rips",
          [](const py::array_t<double>& points, double eps_max, int max_dim) {
              RipsConfig cfg;
              cfg.eps_max = eps_max;
              cfg.max_dim = max_dim;
              return build_rips(cloud_from_array(points), cfg);
          },
          py::arg("points"), py::arg("eps_max"), py::arg("max_dim") = 2);

    m.def("build_lower_star",
          [](const py::array_t<double>& grid) {
              return build_lower_star(grid_from_array(grid));
          },
          py::arg("grid"));

    m.def("compute_persistence",
          [](const FilteredComplex& complex, bool dim0, bool dim1,
             bool drop_zero_persistence) {
              ReductionOptions opts;
              opts.dim0 = dim0;
              opts.dim1 = dim1;
              opts.drop_zero_persistence = drop_zero_persistence;
              return compute_persistence(complex, opts);
          },
          py::arg("complex"), py::arg("dim0") = true, py::arg("dim1") = true,
          py::arg("drop_zero_persistence") = true);

    m.def("train_breakpoints", &train_breakpoints, py::arg("diagrams"),
          py::arg("bins"), py::arg("dim"));

    m.def("bin_diagram", &bin_diagram, py::arg("diagram"), py::arg("model"));

    m.def("chi_statistic",
          [](const py::array_t<double>& omega, const py::array_t<double>& omega2,
             const py::array_t<double>& xi, const py::array_t<double>& xi2,
             const py::array_t<double>& sigma) {
              EmpiricalDistribution o{vector_from_array(omega), 1.0};
              EmpiricalDistribution o2{vector_from_array(omega2), 1.0};
              EmpiricalDistribution x{vector_from_array(xi), 1.0};
              EmpiricalDistribution x2{vector_from_array(xi2), 1.0};
              return chi_statistic(o, o2, x, x2, vector_from_array(sigma));
          },
          py::arg("omega"), py::arg("omega2"), py::arg("xi"), py::arg("xi2"),
          py::arg("sigma"));

    m.def("calibrate_threshold",
          [](const std::vector<EmpiricalDistribution>& pre, std::size_t window,
             std::optional<std::size_t> lookback, const py::array_t<double>& sigma,
             double alpha, std::size_t horizon, std::size_t replicates,
             std::uint64_t seed, bool pool_raw_mass) {
              const DetectorConfig cfg =
                  make_config(window, lookback, 0.0, sigma, pool_raw_mass);
              return calibrate_threshold(pre, cfg, alpha, horizon, replicates, seed);
          },
          py::arg("pre_change_dists"), py::arg("window"), py::arg("lookback"),
          py::arg("sigma"), py::arg("alpha"), py::arg("horizon"),
          py::arg("replicates"), py::arg("seed"), py::arg("pool_raw_mass") = false);

    m.def("sample_circles",
          [](std::size_t n_points, const std::vector<std::array<double, 2>>& centers,
             double radius, double noise_sd, std::uint64_t seed) {
              const PointCloud cloud =
                  sample_circles(n_points, centers, radius, noise_sd, seed);
              py::array_t<double> out({cloud.size(), cloud.dim()});
              std::memcpy(out.mutable_data(), cloud.coords().data(),
                          cloud.coords().size() * sizeof(double));
              return out;
          },
          py::arg("n_points"), py::arg("centers"), py::arg("radius"),
          py::arg("noise_sd"), py::arg("seed"));

    m.def("gen_grid_stream",
          [](std::size_t rows, std::size_t cols, std::size_t frames,
             std::size_t change_at, double pre_blob_amp, double post_blob_amp,
             double noise_sd, std::size_t n_blobs, std::uint64_t seed) {
              GridStreamParams p;
              p.rows = rows;
              p.cols = cols;
              p.frames = frames;
              p.change_at = change_at;
              p.pre_blob_amp = pre_blob_amp;
              p.post_blob_amp = post_blob_amp;
              p.noise_sd = noise_sd;
              p.n_blobs = n_blobs;
              p.seed = seed;
              py::list out;
              for (const auto& g : gen_grid_stream(p)) out.append(grid_to_array(g));
              return out;
          },
          py::arg("rows"), py::arg("cols"), py::arg("frames"), py::arg("change_at"),
          py::arg("pre_blob_amp") = 1.0, py::arg("post_blob_amp") = 2.0,
          py::arg("noise_sd") = 0.05, py::arg("n_blobs") = 3, py::arg("seed") = 0);
}
