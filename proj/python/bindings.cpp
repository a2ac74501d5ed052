#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "panopose/fmi.hpp"
#include "panopose/pipeline.hpp"
#include "panopose/synth.hpp"

namespace py = pybind11;
using namespace panopose;

namespace {

Image image_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D grayscale array");
  Image img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  std::copy(arr.data(), arr.data() + img.data.size(), img.data.begin());
  return img;
}

py::array_t<float> array_from_image(const Image& img) {
  py::array_t<float> arr({img.height, img.width});
  std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
  return arr;
}

PanoramaImage panorama_from_array(
    const py::array_t<float, py::array::c_style | py::array::forcecast>& arr,
    double aspect_ratio = 1.0) {
  PanoramaImage pano;
  pano.pixels = image_from_array(arr);
  pano.model.u_max = pano.pixels.width;
  pano.model.v_max = pano.pixels.height;
  pano.model.aspect_ratio = aspect_ratio;
  return pano;
}

std::vector<FitSample> samples_from_arrays(const std::vector<double>& u,
                                           const std::vector<double>& y) {
  if (u.size() != y.size()) throw std::invalid_argument("u and y lengths differ");
  std::vector<FitSample> samples(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) samples[i] = {u[i], y[i]};
  return samples;
}

}  // namespace

PYBIND11_MODULE(_panopose, m) {
  m.doc() = "Relative pose estimation for omni-cameras: cylindrical panoramas, "
            "Fourier-Mellin motion fields and sinusoid fitting";

  py::class_<CylinderModel>(m, "CylinderModel")
      .def(py::init<>())
      .def(py::init([](int u_max, int v_max, double aspect_ratio) {
             return CylinderModel{u_max, v_max, aspect_ratio};
           }),
           py::arg("u_max"), py::arg("v_max"), py::arg("aspect_ratio") = 1.0)
      .def_readwrite("u_max", &CylinderModel::u_max)
      .def_readwrite("v_max", &CylinderModel::v_max)
      .def_readwrite("aspect_ratio", &CylinderModel::aspect_ratio)
      .def_property_readonly("radius", &CylinderModel::radius)
      .def_property_readonly("gamma", &CylinderModel::gamma);

  py::class_<RegistrationResult>(m, "RegistrationResult")
      .def_readonly("du", &RegistrationResult::du)
      .def_readonly("dv", &RegistrationResult::dv)
      .def_readonly("rotation", &RegistrationResult::rotation)
      .def_readonly("scale", &RegistrationResult::scale)
      .def_readonly("response", &RegistrationResult::response)
      .def("__repr__", [](const RegistrationResult& r) {
        return "RegistrationResult(du=" + std::to_string(r.du) + ", dv=" + std::to_string(r.dv) +
               ", rotation=" + std::to_string(r.rotation) + ", scale=" + std::to_string(r.scale) +
               ", response=" + std::to_string(r.response) + ")";
      });

  py::class_<MotionSample>(m, "MotionSample")
      .def_readonly("u_p", &MotionSample::u_p)
      .def_readonly("du", &MotionSample::du)
      .def_readonly("dv", &MotionSample::dv)
      .def_readonly("rotation", &MotionSample::rotation)
      .def_readonly("scale", &MotionSample::scale)
      .def_readonly("response", &MotionSample::response);

  py::class_<MotionField>(m, "MotionField")
      .def_readonly("samples", &MotionField::samples)
      .def_readonly("window_side", &MotionField::window_side)
      .def_readonly("step", &MotionField::step);

  py::class_<SinusoidParams>(m, "SinusoidParams")
      .def(py::init<>())
      .def(py::init([](double amplitude, double phase, double offset) {
             return SinusoidParams{amplitude, phase, offset};
           }),
           py::arg("amplitude"), py::arg("phase"), py::arg("offset"))
      .def_readwrite("amplitude", &SinusoidParams::amplitude)
      .def_readwrite("phase", &SinusoidParams::phase)
      .def_readwrite("offset", &SinusoidParams::offset);

  py::enum_<HuberForm>(m, "HuberForm")
      .value("paper", HuberForm::paper)
      .value("textbook", HuberForm::textbook);

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("delta", &FitConfig::delta)
      .def_readwrite("max_iters", &FitConfig::max_iters)
      .def_readwrite("tol", &FitConfig::tol)
      .def_readwrite("lambda0", &FitConfig::lambda0)
      .def_readwrite("huber_form", &FitConfig::huber_form);

  py::class_<FitReport>(m, "FitReport")
      .def_readonly("params", &FitReport::params)
      .def_readonly("iterations", &FitReport::iterations)
      .def_readonly("final_cost", &FitReport::final_cost)
      .def_readonly("inlier_rmse", &FitReport::inlier_rmse)
      .def_readonly("converged", &FitReport::converged)
      .def_readonly("amplitude_degenerate", &FitReport::amplitude_degenerate)
      .def_readonly("cost_trace", &FitReport::cost_trace);

  py::class_<PoseEstimate>(m, "PoseEstimate")
      .def_readonly("roll", &PoseEstimate::roll)
      .def_readonly("pitch", &PoseEstimate::pitch)
      .def_readonly("yaw", &PoseEstimate::yaw)
      .def_readonly("tz_scaled", &PoseEstimate::tz_scaled)
      .def_readonly("txy_angle", &PoseEstimate::txy_angle)
      .def_readonly("txy_mag_scaled", &PoseEstimate::txy_mag_scaled)
      .def_readonly("scale_resolved", &PoseEstimate::scale_resolved)
      .def_readonly("warnings", &PoseEstimate::warnings)
      .def("__repr__", [](const PoseEstimate& p) {
        return "PoseEstimate(roll=" + std::to_string(p.roll) +
               ", pitch=" + std::to_string(p.pitch) + ", yaw=" + std::to_string(p.yaw) + ")";
      });

  py::class_<RigidTransform>(m, "RigidTransform")
      .def(py::init<>())
      .def_readwrite("rotation", &RigidTransform::rotation)
      .def_readwrite("translation", &RigidTransform::translation)
      .def("inverse", &RigidTransform::inverse)
      .def_static("rotation_about", &RigidTransform::rotation_about, py::arg("axis"),
                  py::arg("angle"));

  py::class_<SceneDepth>(m, "SceneDepth")
      .def_static("constant", &SceneDepth::constant, py::arg("depth"))
      .def_static("per_column", &SceneDepth::per_column, py::arg("depths"))
      .def_static("default_for", &SceneDepth::default_for, py::arg("model"))
      .def("at", &SceneDepth::at, py::arg("u_p"));

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("window_side", &SweepConfig::window_side)
      .def_readwrite("step", &SweepConfig::step)
      .def_readwrite("wrap", &SweepConfig::wrap)
      .def_readwrite("row_offset", &SweepConfig::row_offset)
      .def_readwrite("response_threshold", &SweepConfig::response_threshold)
      .def_readwrite("threads", &SweepConfig::threads);

  py::class_<EstimateConfig>(m, "EstimateConfig")
      .def(py::init<>())
      .def_readwrite("sweep", &EstimateConfig::sweep)
      .def_readwrite("median_k", &EstimateConfig::median_k)
      .def_readwrite("fit", &EstimateConfig::fit);

  py::class_<EstimateResult>(m, "EstimateResult")
      .def_readonly("pose", &EstimateResult::pose)
      .def_readonly("fit_u", &EstimateResult::fit_u)
      .def_readonly("fit_v", &EstimateResult::fit_v)
      .def_readonly("field", &EstimateResult::field)
      .def_readonly("runtime_seconds", &EstimateResult::runtime_seconds);

  // image + cylinder operations
  m.def("read_pgm", [](const std::filesystem::path& p) { return array_from_image(read_pgm(p)); },
        py::arg("path"));
  m.def("write_pgm",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a,
           const std::filesystem::path& p) { write_pgm(image_from_array(a), p); },
        py::arg("image"), py::arg("path"));
  m.def("pano_to_cylinder", &pano_to_cylinder, py::arg("u_p"), py::arg("v_p"), py::arg("model"));
  m.def("cylinder_to_pano",
        [](const Eigen::Vector3d& p, const CylinderModel& m_) {
          const auto uv = cylinder_to_pano(p, m_);
          return py::make_tuple(uv[0], uv[1]);
        },
        py::arg("point"), py::arg("model"));
  m.def("unwrap",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& omni,
           double center_u, double center_v, double rho_min, double rho_max,
           const CylinderModel& model, bool flip_v) {
          OmniImage o;
          o.pixels = image_from_array(omni);
          o.center_u = center_u;
          o.center_v = center_v;
          o.rho_min = rho_min;
          o.rho_max = rho_max;
          return array_from_image(unwrap(o, model, flip_v).pixels);
        },
        py::arg("omni"), py::arg("center_u"), py::arg("center_v"), py::arg("rho_min"),
        py::arg("rho_max"), py::arg("model"), py::arg("flip_v") = false);

  // spectral registration
  m.def("phase_correlate",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& b) {
          const PhaseShift s = phase_correlate(image_from_array(a), image_from_array(b));
          return py::make_tuple(s.du, s.dv, s.response);
        },
        py::arg("win_a"), py::arg("win_b"));
  m.def("register_window",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& b) {
          return register_window(image_from_array(a), image_from_array(b));
        },
        py::arg("win_a"), py::arg("win_b"));

  // motion field
  m.def("sweep",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& b,
           const SweepConfig& config) {
          return sweep(panorama_from_array(a), panorama_from_array(b), config);
        },
        py::arg("pano_1"), py::arg("pano_2"), py::arg("config") = SweepConfig{});
  m.def("median_filter", &median_filter, py::arg("field"), py::arg("k"));

  // sinusoid model and fitting
  m.def("model_eval", &model_eval, py::arg("params"), py::arg("omega"), py::arg("u_p"));
  m.def("pseudo_huber", &pseudo_huber, py::arg("c"), py::arg("delta"),
        py::arg("form") = HuberForm::paper);
  m.def("fit",
        [](const std::vector<double>& u, const std::vector<double>& y, double omega,
           const FitConfig& config) { return fit(samples_from_arrays(u, y), omega, config); },
        py::arg("u"), py::arg("y"), py::arg("omega"), py::arg("config") = FitConfig{});

  // pose
  m.def("extract_pose",
        py::overload_cast<const SinusoidParams&, const SinusoidParams&, const CylinderModel&>(
            &extract_pose),
        py::arg("phi_v"), py::arg("phi_u"), py::arg("model"));
  m.def("to_rotation_matrix", &to_rotation_matrix, py::arg("pose"));

  // synthetic oracle
  m.def("make_texture",
        [](std::uint32_t seed, const CylinderModel& model) {
          return array_from_image(make_texture(seed, model).pixels);
        },
        py::arg("seed"), py::arg("model"));
  m.def("warp",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& pano,
           const RigidTransform& transform, const SceneDepth& depth) {
          return array_from_image(warp(panorama_from_array(pano), transform, depth).pixels);
        },
        py::arg("pano"), py::arg("transform"), py::arg("depth"));
  m.def("predicted_shift",
        [](const RigidTransform& transform, double u_p, const SceneDepth& depth,
           const CylinderModel& model, bool use_small_angle_forms) {
          const Shift s = predicted_shift(transform, u_p, depth, model, use_small_angle_forms);
          return py::make_tuple(s.du, s.dv);
        },
        py::arg("transform"), py::arg("u_p"), py::arg("depth"), py::arg("model"),
        py::arg("use_small_angle_forms") = false);

  // end-to-end pipeline
  m.def("estimate_pose",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& b,
           const EstimateConfig& config) {
          return estimate_pose(panorama_from_array(a), panorama_from_array(b), config);
        },
        py::arg("pano_1"), py::arg("pano_2"), py::arg("config") = EstimateConfig{});
}
