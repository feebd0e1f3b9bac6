#include <doctest.h>

#include <sstream>

#include "edgemind/common/errors.hpp"
#include "edgemind/common/geo.hpp"
#include "edgemind/eval/cluster_eval.hpp"
#include "edgemind/mobsim/mobsim.hpp"
#include "edgemind/telemetry/telemetry.hpp"
#include "oracles.hpp"

using namespace edgemind;
using namespace edgemind::eval;

namespace {

clustering::ClusterAssignment labels_of(std::vector<int> l, std::size_t k) {
  clustering::ClusterAssignment a;
  a.labels = std::move(l);
  a.n_clusters = k;
  a.min_size = 0;
  a.max_size = a.labels.size();
  return a;
}

const std::vector<int> kStable{0, 0, 0, 0, 1, 1, 1, 1};
const std::vector<int> kMarked{0, 0, 1, 1, 0, 0, 1, 1};

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("intra and inter split the handovers") {
    HandoverCounts hc{0, 10, CountMatrix::Zero(4, 4)};
    hc.counts << 0, 3, 1, 0, 2, 0, 0, 4, 0, 0, 0, 5, 1, 0, 6, 0;
    const auto s = split_handovers(hc, labels_of({0, 0, 1, 1}, 2));
    CHECK(s.intra == 3 + 2 + 5 + 6);
    CHECK(s.inter == 1 + 4 + 1);
    CHECK(s.intra + s.inter == hc.total());
    CHECK(*ratio(s) == doctest::Approx(16.0 / 6.0));
    const auto relabeled = split_handovers(hc, labels_of({1, 1, 0, 0}, 2));
    CHECK(relabeled.intra == s.intra);
    CHECK_FALSE(ratio({5, 0}).has_value());
    CHECK_THROWS_AS(split_handovers(hc, labels_of({0, 1}, 2)), ShapeError);
  }

  TEST_CASE("per-window counts add up to the whole trace") {
    mobsim::SimConfig cfg;
    cfg.n_stations = 5;
    cfg.n_ues = 30;
    const auto log = mobsim::simulate(cfg, mobsim::generate_topology(cfg));
    const auto whole = telemetry::count_handovers(log, 0, log.end_s);
    CountMatrix sum = CountMatrix::Zero(5, 5);
    for (std::int64_t s = 0; s < log.end_s; s += 7200) sum += telemetry::count_handovers(log, s, 7200).counts;
    CHECK(sum == whole.counts);
    std::int64_t n = 0;
    for (const auto& e : log.events) n += is_handover(e.kind);
    CHECK(whole.total() == n);
  }

  TEST_CASE("scoring never sees the window it is scored on") {
    const std::int64_t period = 1000;
    const auto plain = test::grouped_log({kStable, kStable, kStable, kStable}, period, 400, 1);
    const auto marked = test::grouped_log({kStable, kStable, kMarked, kStable}, period, 400, 1);
    const auto a = evaluate_periodic(plain, clustering::Strategy::data_driven, 2, period, 3);
    const auto b = evaluate_periodic(marked, clustering::Strategy::data_driven, 2, period, 3);
    REQUIRE(b.points.size() == 3);
    for (const auto& p : b.points) {
      const auto& src = b.assignments[p.assignment].source_window;
      REQUIRE(src.has_value());
      CHECK(src->start + src->len <= p.window_start);
    }
    // Period 2 carries the marker: its score still uses period 1's grouping.
    const auto& used = b.assignments[b.points[1].assignment];
    CHECK(clustering::adjusted_rand_index(used.labels, kStable) == doctest::Approx(1.0));
    CHECK(used.labels == a.assignments[a.points[1].assignment].labels);
    CHECK(b.points[1].inter > b.points[1].intra);
    // The marker shows up one period later.
    const auto& next = b.assignments[b.points[2].assignment];
    CHECK(clustering::adjusted_rand_index(next.labels, kMarked) == doctest::Approx(1.0));
  }

  TEST_CASE("periodic scoring slots and limits") {
    const auto log = test::grouped_log({kStable, kStable, kStable}, 1000, 100, 2);
    PeriodicOptions opt;
    opt.score_bin_s = 250;
    const auto r = evaluate_periodic(log, clustering::Strategy::data_driven, 2, 1000, 1, opt);
    CHECK(r.points.size() == 8);
    CHECK(r.points[0].window_start == 1000);
    CHECK(r.points[3].window_start == 1750);
    CHECK_FALSE(r.mean_R().has_value());  // no inter-cluster handovers at all
    opt.score_bin_s = 300;
    CHECK_THROWS_AS(evaluate_periodic(log, clustering::Strategy::data_driven, 2, 1000, 1, opt), ConfigError);
    CHECK_THROWS_AS(evaluate_periodic(log, clustering::Strategy::data_driven, 2, 2000, 1), InsufficientData);
    const auto geo = evaluate_periodic(log, clustering::Strategy::geographic, 2, 1000, 1);
    CHECK(geo.assignments.size() == 1);
    CHECK(geo.points.size() == 2);
  }

  TEST_CASE("ratio table needs two seeds") {
    const auto log = test::grouped_log({kStable, kStable, kStable}, 1000, 100, 2);
    CHECK_THROWS_AS(ratio_vs_clusters(log, clustering::Strategy::geographic, {2}, 1000, {1}), ConfigError);
    const auto rows = ratio_vs_clusters(log, clustering::Strategy::geographic, {2, 4}, 1000, {1, 2, 3});
    CHECK(rows.size() == 2);
    CHECK(rows[0].n_clusters == 2);
  }

  TEST_CASE("propagation delay") {
    const geo::LatLon dc{37.75, -122.44};
    std::vector<Station> st{{StationId(0), dc.lat, dc.lon, 1.0}};
    const auto p = geo::destination(dc, 60.0, 5100.0);
    st.push_back({StationId(1), p.lat, p.lon, 1.0});
    const auto r = propagation_delay(st, dc);
    CHECK(r.delay_us[0] == 0.0);
    // 5100 m at c / 1.468.
    CHECK(r.delay_us[1] == doctest::Approx(5100.0 / (299792458.0 / 1.468) * 1e6).epsilon(1e-9));
    CHECK(r.delay_us[1] == doctest::Approx(24.97).epsilon(1e-3));
    CHECK(r.max_us == r.delay_us[1]);
    CHECK(r.mean_us == doctest::Approx(r.delay_us[1] / 2.0));
    std::ostringstream out;
    write_delays(out, r);
    CHECK(out.str().rfind("station,delay_us\n0,0\n", 0) == 0);
  }
}
