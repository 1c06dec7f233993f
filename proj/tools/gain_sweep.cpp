// Grid search for the shipped PI defaults. Run once and copy the winner into
// control::PidGains.
//
// The published step response is rise 0.254 s, 2% settling 0.451 s, no
// visible peak. ki = 0 would match those numbers exactly (the
// command = actual + u loop is first order and the settle/rise ratio of the
// targets is the first-order ln50/ln9), but that ships a dead integral path,
// and any real ki trades overshoot against the slower metrics. So: require
// ki >= 0.25, require rise within 0.254 +- 0.08, settle within 0.451 +- 0.15,
// overshoot under 2%, and pick the candidate with the largest worst-case
// margin inside those bands.
#include <cmath>
#include <cstdio>
#include <limits>

#include "follower/control.hpp"

using follower::control::StepMetrics;
using follower::control::step_response_metrics;

namespace {

constexpr double kTau = 0.15;
constexpr double kDt = 0.001;
constexpr double kDuration = 4.0;
constexpr double kRiseTarget = 0.254, kRiseBand = 0.08;
constexpr double kSettleTarget = 0.451, kSettleBand = 0.15;
constexpr double kOvershootMax = 2.0;

struct Candidate {
  double kp = 0, ki = 0;
  double rise = 0, settle = 0, overshoot = 0;
  double margin = -std::numeric_limits<double>::infinity();
};

}  // namespace

int main() {
  Candidate best;
  for (int ip = 0; ip <= 340; ++ip) {
    double kp = 0.8 + 0.005 * ip;
    for (int ii = 0; ii <= 55; ++ii) {
      double ki = 0.25 + 0.05 * ii;
      StepMetrics m =
          step_response_metrics({kp, ki, 0.0}, kTau, kDt, kDuration);
      if (!m.rise_time_s || !m.settling_time_s) continue;
      double rise_margin =
          (kRiseBand - std::abs(*m.rise_time_s - kRiseTarget)) / kRiseBand;
      double settle_margin =
          (kSettleBand - std::abs(*m.settling_time_s - kSettleTarget)) /
          kSettleBand;
      double os_margin = (kOvershootMax - m.overshoot_pct) / kOvershootMax;
      double margin = std::min({rise_margin, settle_margin, os_margin});
      if (margin > best.margin)
        best = {kp,
                ki,
                *m.rise_time_s,
                *m.settling_time_s,
                m.overshoot_pct,
                margin};
    }
  }
  if (best.margin <= 0) {
    std::fprintf(stderr, "no candidate inside all bands (best margin %.3f)\n",
                 best.margin);
    return 2;
  }
  std::printf(
      "kp=%.3f ki=%.2f rise=%.4fs settle=%.4fs overshoot=%.3f%% margin=%.3f\n",
      best.kp, best.ki, best.rise, best.settle, best.overshoot, best.margin);
  return 0;
}
