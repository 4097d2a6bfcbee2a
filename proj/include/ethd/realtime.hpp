// Two-process real-time mode: the same RobotSide/HeadsetSide logic paced by
// the wall clock over UDP unicast. The physical hand lives with the robot
// process (it is the contact authority); the headset process runs its own
// identically-seeded replica to drive the tracking pipeline, so the two views
// can differ by at most the transport delay times the prop speed.

#ifndef ETHD_REALTIME_HPP
#define ETHD_REALTIME_HPP

#include <string>

#include "ethd/scenario.hpp"
#include "ethd/trial.hpp"

namespace ethd {

struct RealtimeOptions {
  std::string peer_host = "127.0.0.1";
  std::uint16_t local_port = 0;   // 0 -> role default
  std::uint16_t remote_port = 0;  // 0 -> role default
};

// Run one robot-side trial in real time; returns the trial record (virtual
// collision timing stays with the headset process).
TrialRecord serve_robot(const Scenario& scenario, const RealtimeOptions& opts);

// Run the headset side for the scenario horizon; reports the virtual
// collision time on stdout and in the returned record.
TrialRecord serve_headset(const Scenario& scenario, const RealtimeOptions& opts);

}  // namespace ethd

#endif  // ETHD_REALTIME_HPP
