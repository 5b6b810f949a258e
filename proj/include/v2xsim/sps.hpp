#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "v2xsim/resource_grid.hpp"

namespace v2xsim {

// Sensing-based semi-persistent scheduling. Each UE keeps a rolling sensing
// history (S-RSSI per subframe/subchannel, decoded reservations, own
// transmit subframes), excludes candidate resources that sensed reservations
// project onto, ranks the rest by average S-RSSI and picks uniformly from
// the quietest fraction.

struct SpsConfig {
  double th_sps_dbm = -110.0;     // RSRP exclusion threshold
  double th_step_db = 3.0;        // relaxation step when too few candidates remain
  double shortlist_fraction = 0.20;
  int rc_min = 5;
  int rc_max = 15;
  double prob_keep = 0.0;         // probability of re-arming on the same CSR

  void validate() const;
};

struct Reservation {
  std::int64_t next_subframe = 0;
  int subchannel = 0;
  int period_ms = 100;
  int rc = 0;  // remaining opportunities before the keep-or-reselect decision
};

struct DecodedReservation {
  std::int64_t subframe = 0;
  int subchannel = 0;
  double rsrp_dbm = 0.0;
  int period_ms = 100;
};

struct DecodedInfo {
  double rsrp_dbm = 0.0;
  int period_ms = 100;
};

// Rolling per-UE sensing history over the trailing span_ms subframes.
// Observations are stored in a ring keyed by subframe; a slot is valid only
// while its subframe lies within the window, so old entries age out without
// explicit eviction.
class SensingWindow {
 public:
  SensingWindow(int span_ms = 1000, int subchannels = 2);

  // Records the aggregate S-RSSI sensed on one subchannel, optionally with a
  // decoded reservation. Throws std::logic_error if the UE transmitted in
  // this subframe (half duplex: unmonitored subframes carry no observations).
  void record_observation(std::int64_t subframe, int subchannel, double s_rssi_dbm,
                          const std::optional<DecodedInfo>& decoded = std::nullopt);

  // Marks a subframe as unmonitored because this UE transmitted in it.
  void record_own_transmission(std::int64_t subframe);

  // Drops decoded reservations that fell out of [now - span, now).
  void advance_to(std::int64_t now);

  int span_ms() const { return span_ms_; }
  int subchannels() const { return subchannels_; }
  std::int64_t latest() const { return latest_; }

  // S-RSSI observed at (subframe, subchannel), if sensed and within the
  // window ending at `now`.
  std::optional<double> s_rssi_dbm(std::int64_t subframe, int subchannel,
                                   std::int64_t now) const;
  bool is_unmonitored(std::int64_t subframe, std::int64_t now) const;

  const std::deque<DecodedReservation>& decoded_reservations() const { return decoded_; }
  std::vector<std::int64_t> unmonitored_subframes(std::int64_t now) const;
  int observation_count(std::int64_t now) const;

 private:
  struct Slot {
    std::int64_t subframe = -1;
    bool unmonitored = false;
  };
  Slot& slot_for(std::int64_t subframe);

  int span_ms_;
  int subchannels_;
  std::int64_t latest_ = -1;
  std::vector<Slot> slots_;
  std::vector<float> rssi_;  // span x subchannels, NaN = not sensed
  std::deque<DecodedReservation> decoded_;
};

// Removes candidates that are half-duplex blocked (subframe period-congruent
// to one of this UE's own transmissions) or that a decoded reservation with
// RSRP above th_dbm projects onto. `now` bounds the sensing window;
// half-duplex congruence uses the grid reservation period.
std::vector<CsrId> exclusion_step(const std::vector<CsrId>& candidates,
                                  const SensingWindow& window, double th_dbm,
                                  std::int64_t now, const GridConfig& grid);

struct SelectionResult {
  Reservation reservation;
  int candidate_total = 0;
  int shortlist_size = 0;
  double final_threshold_dbm = 0.0;
  int relaxation_rounds = 0;
};

// Full resource (re)selection at subframe `now`: builds the candidate set
// over the selection window, excludes, relaxes the threshold in th_step_db
// increments until at least shortlist_fraction of the candidates survive,
// ranks by mean S-RSSI over period-aligned sensed subframes (unsensed ranks
// best, ties broken by linear index) and picks uniformly from the shortlist.
SelectionResult select_resource(std::int64_t now, const SensingWindow& window,
                                const SpsConfig& cfg, const GridConfig& grid,
                                std::mt19937_64& rng);

struct OpportunityOutcome {
  Reservation reservation;  // advanced by one period
  bool reselect = false;    // counter expired and the keep lottery failed
  bool kept = false;        // counter expired and the reservation was re-armed
};

// Advances the reservation lifecycle at a reserved opportunity. Throws
// std::logic_error when called off-schedule.
OpportunityOutcome on_transmit_opportunity(const Reservation& r, std::int64_t now,
                                           const SpsConfig& cfg, std::mt19937_64& rng);

// Reselection counter draw shared by initial selection and re-arming.
int draw_reselection_counter(const SpsConfig& cfg, std::mt19937_64& rng);

}  // namespace v2xsim
