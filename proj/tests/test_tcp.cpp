#include "mprox/tcp_receiver.hpp"
#include "mprox/tcp_sender.hpp"

#include <doctest.h>

#include <vector>

using namespace mprox;

namespace {

struct SenderFixture {
    Engine eng;
    std::vector<Segment> sent;
    NewRenoSender sender;

    explicit SenderFixture(NewRenoSender::Config cfg = {})
        : sender(eng, cfg, [this](const Segment& s) { sent.push_back(s); }) {}

    Segment ack(std::uint64_t ack_no, std::uint64_t adv = 64ull << 20, SimTime ts_echo = 0) {
        Segment a;
        a.ack = true;
        a.ack_no = ack_no;
        a.adv_window = adv;
        a.ts_val = eng.now();
        a.ts_echo = ts_echo;
        return a;
    }
};

} // namespace

TEST_CASE("start sends the initial window") {
    SenderFixture f;
    f.sender.start();
    REQUIRE(f.sent.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(f.sent[i].seq == i * 1400);
        CHECK(f.sent[i].len == 1400);
        CHECK(f.sent[i].payload_sum == stream_range_sum(i * 1400, (i + 1) * 1400));
    }
    CHECK(f.sender.in_flight() == 14000);
    CHECK(f.sender.cwnd() == 14000);
    CHECK(f.sender.phase() == TcpPhase::SlowStart);
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("slow start grows cwnd by one MSS per new ACK") {
    SenderFixture f;
    f.sender.start();
    f.sender.on_ack(f.ack(1400));
    CHECK(f.sender.cwnd() == 15400);
    CHECK(f.sender.snd_una() == 1400);
    CHECK(f.sender.in_flight() == 15400); // refilled to the window
    f.sender.on_ack(f.ack(2800));
    CHECK(f.sender.cwnd() == 16800);
    CHECK(f.sender.phase() == TcpPhase::SlowStart);
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("three duplicate ACKs trigger fast retransmit with NewReno sizing") {
    SenderFixture f;
    f.sender.start(); // flight 14000
    const auto before = f.sent.size();
    f.sender.on_ack(f.ack(0));
    f.sender.on_ack(f.ack(0));
    CHECK(f.sender.phase() == TcpPhase::SlowStart);
    f.sender.on_ack(f.ack(0)); // third duplicate
    CHECK(f.sender.phase() == TcpPhase::FastRecovery);
    CHECK(f.sender.ssthresh() == 7000);      // max(14000/2, 2*1400)
    CHECK(f.sender.cwnd() == 7000 + 4200);   // ssthresh + 3 MSS
    CHECK(f.sender.fast_retransmits() == 1);
    REQUIRE(f.sent.size() == before + 1);    // the retransmission
    CHECK(f.sent.back().seq == 0);
    CHECK(f.sent.back().len == 1400);

    SUBCASE("further duplicates inflate cwnd") {
        f.sender.on_ack(f.ack(0));
        CHECK(f.sender.cwnd() == 12600);
        CHECK(f.sender.fast_retransmits() == 1); // no second retransmission
    }

    SUBCASE("a partial ACK retransmits the next hole and deflates") {
        const auto n = f.sent.size();
        f.sender.on_ack(f.ack(1400)); // < recover (14000)
        CHECK(f.sender.phase() == TcpPhase::FastRecovery);
        CHECK(f.sender.cwnd() == 11200 - 1400 + 1400);
        REQUIRE(f.sent.size() > n);
        CHECK(f.sent[n].seq == 1400); // hole retransmission
    }

    SUBCASE("the full ACK exits recovery at ssthresh") {
        f.sender.on_ack(f.ack(14000));
        CHECK(f.sender.phase() == TcpPhase::CongestionAvoidance);
        CHECK(f.sender.cwnd() == 7000);
        CHECK(f.sender.in_flight() == 7000); // refilled from the new window

        // Congestion avoidance afterwards: +mss^2/cwnd per new ACK.
        f.sender.on_ack(f.ack(15400));
        CHECK(f.sender.cwnd() == 7000 + 1400 * 1400 / 7000);
    }
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("fast retransmit sizing from a 53-segment flight") {
    NewRenoSender::Config cfg;
    cfg.initial_cwnd_segments = 53;
    SenderFixture f(cfg);
    f.sender.start();
    CHECK(f.sender.in_flight() == 53 * 1400);
    for (int i = 0; i < 3; ++i) {
        f.sender.on_ack(f.ack(0));
    }
    CHECK(f.sender.ssthresh() == 53 * 1400 / 2); // 37100
    CHECK(f.sender.cwnd() == 37100 + 3 * 1400);
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("RTO collapses to one MSS, goes back to snd_una and backs off") {
    SenderFixture f;
    f.sender.start(); // t=0, initial RTO 1 s
    f.eng.run_until(999'999);
    CHECK(f.sender.rto_count() == 0);
    f.eng.run_until(1'000'000);
    CHECK(f.sender.rto_count() == 1);
    CHECK(f.sender.cwnd() == 1400);
    CHECK(f.sender.ssthresh() == 7000); // half the 14000 flight
    CHECK(f.sender.phase() == TcpPhase::SlowStart);
    CHECK(f.sender.snd_una() == 0);
    CHECK(f.sender.in_flight() == 1400); // go-back-N restarted from snd_una
    CHECK(f.sent.back().seq == 0);

    // Exponential backoff: next timeout doubles (1 s << 1).
    f.eng.run_until(2'999'999);
    CHECK(f.sender.rto_count() == 1);
    f.eng.run_until(3'000'000);
    CHECK(f.sender.rto_count() == 2);
    f.eng.run_until(7'000'000); // +4 s
    CHECK(f.sender.rto_count() == 3);
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("a new ACK resets the RTO backoff") {
    SenderFixture f;
    f.sender.start();
    f.eng.run_until(1'000'000); // first RTO, backoff shift now 1
    REQUIRE(f.sender.rto_count() == 1);
    f.sender.on_ack(f.ack(1400));
    // Rearmed without backoff: next timeout 1 s from the ACK, not 2 s.
    f.eng.run_until(2'000'000);
    CHECK(f.sender.rto_count() == 2);
}

TEST_CASE("Jacobson estimator drives the RTO with the 200 ms floor") {
    SenderFixture f;
    f.sender.start();
    f.eng.run_until(50'000);
    f.sender.on_ack(f.ack(1400, 64ull << 20, 30'000)); // sample 20 ms
    CHECK(f.sender.srtt_us() == 20'000);
    CHECK(f.sender.rto_us() == 200'000); // 20ms + 4*10ms, clamped up to the floor

    f.eng.run_until(400'000);
    f.sender.on_ack(f.ack(2800, 64ull << 20, 100'000)); // sample 300 ms
    CHECK(f.sender.srtt_us() == (7 * 20'000 + 300'000) / 8);
    CHECK(f.sender.rto_us() == 55'000 + 4 * 77'500);
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("zero advertised window stalls sending and starts persist probes") {
    SenderFixture f;
    f.sender.start();
    f.sender.on_ack(f.ack(14000, 0)); // everything acked, window slammed shut
    CHECK(f.sender.in_flight() == 0);
    CHECK(f.sender.persist_armed());
    const auto n = f.sent.size();
    f.eng.run_until(200'000);
    REQUIRE(f.sent.size() == n + 1); // one probe per persist interval
    CHECK(f.sent.back().len == 0);   // zero-length probe
    CHECK(f.sent.back().seq == 14000);
    f.eng.run_until(400'000);
    CHECK(f.sent.size() == n + 2);

    // The window reopens: sending resumes, probing stops.
    f.sender.on_ack(f.ack(14000, 64ull << 20));
    CHECK_FALSE(f.sender.persist_armed());
    CHECK(f.sender.in_flight() == f.sender.cwnd());
    const auto m = f.sent.size();
    f.eng.run_until(800'000);
    CHECK(f.sent.size() == m); // no further probes
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("in-flight never exceeds min(cwnd, awnd)") {
    NewRenoSender::Config cfg;
    cfg.initial_awnd = 5000; // awnd binds before cwnd
    SenderFixture f(cfg);
    f.sender.start();
    CHECK(f.sender.in_flight() <= 5000);
    f.sender.on_ack(f.ack(1400, 5000));
    CHECK(f.sender.in_flight() <= 5000);
    f.sender.on_ack(f.ack(2800, 40000));
    CHECK(f.sender.in_flight() <= f.sender.cwnd());
    CHECK(f.sender.clamp_violations() == 0);
}

TEST_CASE("an ACK beyond snd_max is discarded") {
    SenderFixture f;
    f.sender.start();
    const auto cwnd = f.sender.cwnd();
    f.sender.on_ack(f.ack(999'999));
    CHECK(f.sender.discarded_acks() == 1);
    CHECK(f.sender.cwnd() == cwnd);
    CHECK(f.sender.snd_una() == 0);
}

TEST_CASE("a bounded transfer stops at total_bytes") {
    NewRenoSender::Config cfg;
    cfg.total_bytes = 3500; // 2.5 segments
    SenderFixture f(cfg);
    f.sender.start();
    REQUIRE(f.sent.size() == 3);
    CHECK(f.sent[2].len == 700); // the tail segment is short
    f.sender.on_ack(f.ack(3500));
    CHECK(f.sender.complete());
    f.eng.run_until(10'000'000);
    CHECK(f.sender.rto_count() == 0); // RTO disarmed once everything is acked
}

TEST_CASE("receiver delivers in order and fills holes") {
    Engine eng;
    std::vector<Segment> acks;
    TcpReceiver rx(eng, {}, [&](const Segment& a) { acks.push_back(a); });

    rx.on_segment(make_data_segment(0, 1400, 10, 0));
    CHECK(rx.delivered() == 1400);
    REQUIRE(acks.size() == 1);
    CHECK(acks[0].ack_no == 1400);
    CHECK(acks[0].ts_echo == 10); // echoes the segment timestamp

    rx.on_segment(make_data_segment(2800, 1400, 20, 0)); // hole at 1400
    CHECK(rx.delivered() == 1400);
    CHECK(acks.back().ack_no == 1400); // duplicate ACK
    CHECK(rx.out_of_order_segments() == 1);

    rx.on_segment(make_data_segment(1400, 1400, 30, 0)); // plugs the hole
    CHECK(rx.delivered() == 4200);
    CHECK(acks.back().ack_no == 4200);
    CHECK(rx.digest() == stream_range_sum(0, 4200));
    CHECK(rx.corrupt_segments() == 0);
}

TEST_CASE("receiver re-acks duplicates and answers probes") {
    Engine eng;
    std::vector<Segment> acks;
    TcpReceiver rx(eng, {}, [&](const Segment& a) { acks.push_back(a); });
    rx.on_segment(make_data_segment(0, 1400, 10, 0));
    rx.on_segment(make_data_segment(0, 1400, 11, 0)); // stale retransmission
    CHECK(rx.delivered() == 1400);
    CHECK(acks.size() == 2);
    CHECK(acks.back().ack_no == 1400);

    Segment probe; // zero-length window probe
    probe.ts_val = 99;
    rx.on_segment(probe);
    CHECK(acks.size() == 3);
    CHECK(acks.back().ack_no == 1400);
    CHECK(acks.back().ts_echo == 99);
}

TEST_CASE("receiver flags a segment whose checksum does not match its range") {
    Engine eng;
    TcpReceiver rx(eng, {}, [](const Segment&) {});
    Segment bad = make_data_segment(0, 1400, 10, 0);
    bad.payload_sum ^= 1;
    rx.on_segment(bad);
    CHECK(rx.corrupt_segments() == 1);
}

TEST_CASE("receiver merges overlapping out-of-order ranges") {
    Engine eng;
    TcpReceiver rx(eng, {}, [](const Segment&) {});
    rx.on_segment(make_data_segment(2800, 1400, 1, 0));
    rx.on_segment(make_data_segment(2100, 1400, 2, 0)); // overlaps the stored range
    rx.on_segment(make_data_segment(0, 2100, 3, 0));
    CHECK(rx.delivered() == 4200);
    CHECK(rx.digest() == stream_range_sum(0, 4200));
}
