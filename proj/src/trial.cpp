#include "ethd/trial.hpp"

#include <cmath>
#include <sstream>

#include "ethd/colocation.hpp"
#include "ethd/csv.hpp"
#include "ethd/rng.hpp"

namespace ethd {

const char* trial_status_name(TrialStatus s) {
  switch (s) {
    case TrialStatus::Completed: return "completed";
    case TrialStatus::TrialTimeout: return "trial_timeout";
    case TrialStatus::SafetyAbort: return "safety_abort";
  }
  return "?";
}

TrialRecord run_trial(const Scenario& scenario, bool record_trace) {
  VirtualWorld world(scenario, record_trace);

  auto& robot = world.robot();
  auto& headset = world.headset();
  world.run([&] {
    return robot.phase() == Phase::Complete && headset.t_virtual().has_value();
  });

  TrialRecord rec;
  rec.seed = scenario.seed;
  rec.kind = scenario.kind;
  rec.strategy = scenario.strategy;
  rec.t_physical_us = robot.t_physical();
  rec.t_virtual_us = headset.t_virtual();
  rec.phase_log = robot.phase_log();
  rec.safety_log = robot.safety_log();
  rec.trace = robot.trace();

  if (robot.phase() == Phase::Complete && rec.t_physical_us && rec.t_virtual_us) {
    rec.status = TrialStatus::Completed;
    rec.latency_ms =
        static_cast<double>(*rec.t_virtual_us - *rec.t_physical_us) / 1000.0;
    if (robot.contact_plant_pos()) rec.contact_plant_pos = *robot.contact_plant_pos();
    rec.hand_at_contact = headset.hand_truth(*rec.t_physical_us);
  } else if (robot.safety().mode == SafetyMode::EStop) {
    rec.status = TrialStatus::SafetyAbort;
  } else {
    rec.status = TrialStatus::TrialTimeout;
  }
  return rec;
}

BatchReport run_batch(const Scenario& base, int n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("run_batch: n_trials must be >= 1");

  BatchReport report;
  report.kind = base.kind;
  report.strategy = base.strategy;
  report.trials = n_trials;
  report.records.reserve(n_trials);

  double sum = 0.0;
  for (int i = 0; i < n_trials; ++i) {
    Scenario s = base;
    s.seed = derive_seed(seed, static_cast<std::uint64_t>(i) + 1);
    TrialRecord rec = run_trial(s);
    if (rec.status == TrialStatus::Completed) {
      ++report.completed;
      sum += *rec.latency_ms;
    }
    report.records.push_back(std::move(rec));
  }

  if (report.completed > 0) report.mean_latency_ms = sum / report.completed;
  if (report.completed > 1) {
    double sq = 0.0;
    for (const auto& rec : report.records)
      if (rec.latency_ms) {
        const double d = *rec.latency_ms - report.mean_latency_ms;
        sq += d * d;
      }
    report.std_latency_ms = std::sqrt(sq / (report.completed - 1));
  } else {
    report.degenerate = true;
  }
  return report;
}

void attach_colocation_summary(BatchReport& report, const Scenario& scenario) {
  const ColocationReport coloc = run_colocation_eval(
      20, 5, scenario.registration_noise, scenario.registration_settings,
      scenario.registration_rate_hz, scenario.registration_duration_s,
      derive_seed(scenario.seed, 0xc010c));
  report.has_colocation = true;
  report.colocation_mean_mm = coloc.mean_mm;
  report.colocation_std_mm = coloc.std_mm;
}

std::string batch_trials_csv(const std::vector<BatchReport>& reports) {
  std::ostringstream os;
  os << csv_header_line("batch_trials");
  os << "# latency_ms = (t_virtual_us - t_physical_us) / 1000; positive means "
        "the virtual collision followed the physical one\n";
  os << "kind,strategy,trial_index,seed,status,t_physical_us,t_virtual_us,"
        "latency_ms\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& rec = r.records[i];
      os << kind_name(r.kind) << ',' << strategy_name(r.strategy) << ',' << i
         << ',' << rec.seed << ',' << trial_status_name(rec.status) << ',';
      if (rec.t_physical_us) os << *rec.t_physical_us;
      os << ',';
      if (rec.t_virtual_us) os << *rec.t_virtual_us;
      os << ',';
      if (rec.latency_ms) os << fmt_fixed(*rec.latency_ms, 3);
      os << '\n';
    }
  }
  return os.str();
}

std::string batch_summary_csv(const std::vector<BatchReport>& reports) {
  std::ostringstream os;
  os << csv_header_line("batch_summary");
  os << "# latency sign: positive means the virtual collision followed the "
        "physical one\n";
  os << "kind,strategy,trials,completed,mean_latency_ms,std_latency_ms,"
        "degenerate,colocation_mean_mm,colocation_std_mm\n";
  for (const auto& r : reports) {
    os << kind_name(r.kind) << ',' << strategy_name(r.strategy) << ','
       << r.trials << ',' << r.completed << ',' << fmt_fixed(r.mean_latency_ms, 3)
       << ',' << fmt_fixed(r.std_latency_ms, 3) << ',' << (r.degenerate ? 1 : 0)
       << ',';
    if (r.has_colocation)
      os << fmt_fixed(r.colocation_mean_mm, 3) << ','
         << fmt_fixed(r.colocation_std_mm, 3);
    else
      os << ',';
    os << '\n';
  }
  return os.str();
}

std::string batch_table(const std::vector<BatchReport>& reports) {
  auto cell = [&](InteractionKind k, Strategy s) -> std::string {
    for (const auto& r : reports) {
      if (r.kind == k && r.strategy == s) {
        if (r.completed == 0) return "-";
        return fmt_fixed(r.mean_latency_ms, 2) + " +/- " +
               fmt_fixed(r.std_latency_ms, 2);
      }
    }
    return "";
  };

  std::ostringstream os;
  os << "Interaction latency, mean +/- std (ms); positive = virtual after "
        "physical\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %-22s %-22s\n", "", "static",
                "dynamic");
  os << line;
  for (InteractionKind k : {InteractionKind::Handover, InteractionKind::FistBump,
                            InteractionKind::HighFive}) {
    const std::string st = cell(k, Strategy::Static);
    const std::string dy = cell(k, Strategy::Dynamic);
    if (st.empty() && dy.empty()) continue;
    std::snprintf(line, sizeof(line), "%-12s %-22s %-22s\n", kind_name(k),
                  st.c_str(), dy.c_str());
    os << line;
  }
  return os.str();
}

std::string trace_csv(const TrialRecord& record) {
  std::ostringstream os;
  os << csv_header_line("controller_trace");
  os << "t_us,target_x,target_y,target_z,plant_x,plant_y,plant_z,weight,"
        "force_n\n";
  for (const auto& row : record.trace) {
    os << row.t << ',' << fmt_fixed(row.target.x, 6) << ','
       << fmt_fixed(row.target.y, 6) << ',' << fmt_fixed(row.target.z, 6) << ','
       << fmt_fixed(row.plant.x, 6) << ',' << fmt_fixed(row.plant.y, 6) << ','
       << fmt_fixed(row.plant.z, 6) << ',' << fmt_fixed(row.weight, 6) << ','
       << fmt_fixed(row.force_n, 3) << '\n';
  }
  return os.str();
}

std::string safety_csv(const std::vector<SafetyTransition>& log) {
  std::ostringstream os;
  os << csv_header_line("safety_transitions");
  os << "t_us,from,to,cause\n";
  for (const auto& tr : log)
    os << tr.t << ',' << safety_mode_name(tr.from) << ','
       << safety_mode_name(tr.to) << ',' << safety_cause_name(tr.cause) << '\n';
  return os.str();
}

std::string phase_csv(const std::vector<PhaseTransition>& log) {
  std::ostringstream os;
  os << csv_header_line("phase_transitions");
  os << "t_us,phase,cause\n";
  for (const auto& tr : log)
    os << tr.t << ',' << phase_name(tr.phase) << ','
       << phase_entry_cause(tr.phase) << '\n';
  return os.str();
}

}  // namespace ethd
