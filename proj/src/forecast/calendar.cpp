#include "edgemind/forecast/calendar.hpp"

#include <chrono>

#include "edgemind/common/errors.hpp"

namespace edgemind::forecast {

Calendar::Calendar(TimePoint epoch, std::int64_t bin_s, HourMapping hours)
    : epoch_(epoch), bin_s_(bin_s), hours_(hours) {
  if (bin_s <= 0) throw ConfigError("bin_s must be > 0");
  if (hours.first_hour < 0 || hours.n_hours < 1 || hours.first_hour + hours.n_hours > 24) {
    throw ConfigError("hour mapping must lie within 0..24");
  }
}

TimePoint Calendar::start_of(std::int64_t bin) const { return epoch_ + std::chrono::seconds{bin * bin_s_}; }

BinInfo Calendar::at(std::int64_t bin) const {
  using namespace std::chrono;
  const auto tp = start_of(bin);
  const auto midnight = floor<days>(tp);
  BinInfo info;
  info.day = (midnight - floor<days>(epoch_)).count();
  info.hour = static_cast<int>(duration_cast<std::chrono::hours>(tp - midnight).count());
  const unsigned wd = weekday{midnight}.c_encoding();
  info.weekday = wd != 0 && wd != 6;
  info.h = hours_.index_of(info.hour);
  return info;
}

}  // namespace edgemind::forecast
