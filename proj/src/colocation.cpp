#include "ethd/colocation.hpp"

#include <cmath>
#include <sstream>

#include "ethd/csv.hpp"
#include "ethd/rng.hpp"

namespace ethd {

ColocationReport run_colocation_eval(int n_registrations, int probes_per_trial,
                                     const NoiseModel& noise,
                                     const RegistrationSettings& settings,
                                     double rate_hz, double duration_s,
                                     std::uint64_t seed) {
  if (n_registrations < 1 || probes_per_trial < 1)
    throw std::invalid_argument("colocation: counts must be >= 1");

  // Fixed representative truth: the board roughly half a metre in front of
  // the headset, mildly rotated.
  Pose truth;
  truth.frame = FrameId::Headset;
  truth.position = {0.3, -0.2, 0.8};
  truth.orientation = Quat::from_axis_angle({0.2, 1.0, 0.1}, 0.35);

  ColocationReport report;
  const Transform true_anchor = inverse(transform_from_pose(truth, FrameId::Board));

  for (int trial = 0; trial < n_registrations; ++trial) {
    NoiseModel m = noise;
    m.seed = derive_seed(seed, 0x100 + static_cast<std::uint64_t>(trial));

    RegistrationWindow window;
    window.duration_s = duration_s;
    for (const auto& s : generate_samples(truth, m, rate_hz, duration_s))
      window.add(s);
    const AnchorTransform anchor = register_window(window, settings);

    // Probe points within arm's reach of the headset.
    Rng probe_rng(derive_seed(seed, 0x9000 + static_cast<std::uint64_t>(trial)));
    double trial_sum = 0.0;
    for (int p = 0; p < probes_per_trial; ++p) {
      const Vec3 probe{probe_rng.uniform(-0.4, 0.4), probe_rng.uniform(-0.4, 0.4),
                       probe_rng.uniform(0.2, 1.0)};
      const double err_mm =
          1000.0 * distance(apply(anchor.transform, probe), apply(true_anchor, probe));
      report.measurements_mm.push_back(err_mm);
      trial_sum += err_mm;
    }

    ColocationTrialRow row;
    row.seed = m.seed;
    row.sample_count = static_cast<int>(window.samples.size());
    row.accepted_count = anchor.sample_count;
    row.error_mm = trial_sum / probes_per_trial;
    row.residual_rms_mm = 1000.0 * anchor.residual_rms_m;
    report.rows.push_back(row);
  }

  const auto n = static_cast<double>(report.measurements_mm.size());
  double sum = 0.0;
  for (double v : report.measurements_mm) sum += v;
  report.mean_mm = sum / n;
  if (report.measurements_mm.size() > 1) {
    double sq = 0.0;
    for (double v : report.measurements_mm) {
      const double d = v - report.mean_mm;
      sq += d * d;
    }
    report.std_mm = std::sqrt(sq / (n - 1.0));
  }
  return report;
}

std::string colocation_csv(const ColocationReport& report) {
  std::ostringstream os;
  os << csv_header_line("colocation");
  os << "seed,sample_count,accepted_count,error_mm,residual_rms_mm\n";
  for (const auto& row : report.rows) {
    os << row.seed << ',' << row.sample_count << ',' << row.accepted_count << ','
       << fmt_fixed(row.error_mm, 4) << ',' << fmt_fixed(row.residual_rms_mm, 4)
       << '\n';
  }
  return os.str();
}

}  // namespace ethd
