// Experiment runner: single trials, seeded batches, and the latency report
// in the 3x2 (interaction x strategy) layout. Contact latency is signed:
// positive means the virtual collision happened after the physical one.

#ifndef ETHD_TRIAL_HPP
#define ETHD_TRIAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "ethd/scenario.hpp"
#include "ethd/sim_world.hpp"

namespace ethd {

enum class TrialStatus { Completed, TrialTimeout, SafetyAbort };

const char* trial_status_name(TrialStatus s);

struct TrialRecord {
  TrialStatus status = TrialStatus::TrialTimeout;
  std::uint64_t seed = 0;
  InteractionKind kind = InteractionKind::Handover;
  Strategy strategy = Strategy::Static;
  std::optional<Micros> t_physical_us;
  std::optional<Micros> t_virtual_us;
  // (t_virtual - t_physical) / 1000, present for completed trials.
  std::optional<double> latency_ms;
  Vec3 contact_plant_pos;
  Vec3 hand_at_contact;
  std::vector<PhaseTransition> phase_log;
  std::vector<SafetyTransition> safety_log;
  std::vector<ControllerTraceRow> trace;
};

TrialRecord run_trial(const Scenario& scenario, bool record_trace = false);

struct BatchReport {
  InteractionKind kind = InteractionKind::Handover;
  Strategy strategy = Strategy::Static;
  int trials = 0;
  int completed = 0;
  double mean_latency_ms = 0.0;
  double std_latency_ms = 0.0;  // unbiased (n-1); 0 with degenerate flag for n=1
  bool degenerate = false;      // fewer than 2 completed trials
  // Spatial-alignment summary for the scenario's registration noise model,
  // filled by attach_colocation_summary().
  bool has_colocation = false;
  double colocation_mean_mm = 0.0;
  double colocation_std_mm = 0.0;
  std::vector<TrialRecord> records;
};

// n seeded trials of one (kind, strategy) cell; per-trial seeds are derived
// from `seed` so cells and trials are independent but reproducible.
BatchReport run_batch(const Scenario& base, int n_trials, std::uint64_t seed);

// Runs the 20x5 registration evaluation under the scenario's noise model and
// stores its mean/std in the report.
void attach_colocation_summary(BatchReport& report, const Scenario& scenario);

// CSV artifacts (schema versioned in the first line).
std::string batch_trials_csv(const std::vector<BatchReport>& reports);
std::string batch_summary_csv(const std::vector<BatchReport>& reports);
// Human-readable mean +/- std table, interactions as rows, strategies as
// columns.
std::string batch_table(const std::vector<BatchReport>& reports);

std::string trace_csv(const TrialRecord& record);
std::string safety_csv(const std::vector<SafetyTransition>& log);
std::string phase_csv(const std::vector<PhaseTransition>& log);

}  // namespace ethd

#endif  // ETHD_TRIAL_HPP
