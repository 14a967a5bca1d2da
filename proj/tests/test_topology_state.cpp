#include <doctest.h>

#include "gridcast/topology_state.hpp"

using gridcast::TopologyState;

TEST_CASE("state index follows the binary-to-decimal rank") {
    CHECK(TopologyState::all_off(4).state_index() == 1);
    CHECK(TopologyState::all_on(4).state_index() == 16);

    // bit layout: branch n is the most significant bit
    TopologyState s = TopologyState::all_off(4);
    s.set_bit(1, true);
    CHECK(s.state_index() == 2);
    s.set_bit(4, true);
    CHECK(s.state_index() == 10);
}

TEST_CASE("state index round trip is a bijection") {
    const int n = 6;
    for (std::uint64_t idx = 1; idx <= (1ull << n); ++idx) {
        const TopologyState s = TopologyState::from_state_index(n, idx);
        CHECK(s.state_index() == idx);
    }
}

TEST_CASE("no-reconnection check matches the bitwise disjunction rule") {
    TopologyState i = TopologyState::all_on(3);
    TopologyState j = i.with_outaged({2});
    CHECK(i.can_transition_to(j));
    CHECK(j.can_transition_to(j));
    CHECK_FALSE(j.can_transition_to(i));  // would reconnect branch 2
}

TEST_CASE("outage bookkeeping across word boundaries") {
    TopologyState s = TopologyState::all_on(130);
    s = s.with_outaged({1, 64, 65, 130});
    CHECK(s.outaged_branches() == std::vector<int>{1, 64, 65, 130});
    CHECK(s.on_count() == 126);
    CHECK(TopologyState::all_on(130).can_transition_to(s));
}

TEST_CASE("hex encoding puts branch n first") {
    TopologyState s = TopologyState::all_off(8);
    s.set_bit(1, true);
    CHECK(s.hex() == "01");
    s.set_bit(8, true);
    CHECK(s.hex() == "81");
    CHECK(TopologyState::all_on(6).hex() == "3f");
}

TEST_CASE("ordering is numeric on the state word") {
    const TopologyState lo = TopologyState::from_state_index(5, 7);
    const TopologyState hi = TopologyState::from_state_index(5, 23);
    CHECK(lo < hi);
    CHECK(lo == TopologyState::from_state_index(5, 7));
}
