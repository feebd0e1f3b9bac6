#pragma once

#include <cstdint>
#include <optional>

#include "edgemind/telemetry/types.hpp"

namespace edgemind::forecast {

// Calendar hours that produce rows, and their h(t) index: hour `first_hour`
// maps to 0. {0, 24} is the full day; {15, 5} is a 15:00-20:00 window.
struct HourMapping {
  int first_hour = 0;
  int n_hours = 24;

  std::optional<int> index_of(int hour) const {
    const int h = hour - first_hour;
    if (h < 0 || h >= n_hours) return std::nullopt;
    return h;
  }
};

struct BinInfo {
  std::int64_t day = 0;  // days since the epoch's midnight
  int hour = 0;
  bool weekday = true;
  std::optional<int> h;  // nullopt outside the mapped hours
};

class Calendar {
 public:
  Calendar(TimePoint epoch, std::int64_t bin_s, HourMapping hours = {});

  BinInfo at(std::int64_t bin) const;  // described by the bin's start time
  TimePoint start_of(std::int64_t bin) const;
  std::int64_t bin_s() const { return bin_s_; }
  const HourMapping& hours() const { return hours_; }
  TimePoint epoch() const { return epoch_; }

 private:
  TimePoint epoch_;
  std::int64_t bin_s_;
  HourMapping hours_;
};

}  // namespace edgemind::forecast
