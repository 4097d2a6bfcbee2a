// Spatial-alignment evaluation: repeated registrations against the synthetic
// detection noise, recording the positional error at several probe points per
// trial (20 trials x 5 probes by default, 100 measurements).

#ifndef ETHD_COLOCATION_HPP
#define ETHD_COLOCATION_HPP

#include <string>
#include <vector>

#include "ethd/registration.hpp"

namespace ethd {

struct ColocationTrialRow {
  std::uint64_t seed = 0;
  int sample_count = 0;
  int accepted_count = 0;
  double error_mm = 0.0;  // mean over this trial's probes
  double residual_rms_mm = 0.0;
};

struct ColocationReport {
  std::vector<ColocationTrialRow> rows;
  std::vector<double> measurements_mm;  // every probe error
  double mean_mm = 0.0;
  double std_mm = 0.0;  // unbiased (n-1)
};

ColocationReport run_colocation_eval(int n_registrations, int probes_per_trial,
                                     const NoiseModel& noise,
                                     const RegistrationSettings& settings,
                                     double rate_hz, double duration_s,
                                     std::uint64_t seed);

std::string colocation_csv(const ColocationReport& report);

}  // namespace ethd

#endif  // ETHD_COLOCATION_HPP
