#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "pstt/schedule.hpp"

using namespace pstt;

namespace {

const ChipSpec& chip() { return test::chip0_from_file(); }

std::vector<Sample> calibration(const std::string& gate, const QubitId& q) {
    return chip().find_calibration(gate)->samples.at(q);
}

SourceFile corpus() {
    std::ifstream in(PSTT_TEST_DATA "/corpus.pstt");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace

TEST(Emit, SingleGate) {
    auto s = emit(test::judgement("x:^-20 q1", "H1(x)", "q1"), chip());
    ASSERT_EQ(s.channels.size(), 1u);
    const Channel& c = s.channels.at("q1");
    EXPECT_EQ(c.start_ns, -20);
    EXPECT_EQ(c.end_ns, 0);
    EXPECT_EQ(c.samples, calibration("H1", "q1"));
    ASSERT_EQ(s.provenance.size(), 1u);
    EXPECT_EQ(s.provenance[0], (Provenance{"H1", "q1", -20, 0}));
}

TEST(Emit, DelayThenGate) {
    auto s = emit(test::judgement("x:^-50 q1", "H1(delay[q1,30](x))", "q1"), chip());
    const Channel& c = s.channels.at("q1");
    EXPECT_EQ(c.start_ns, -50);
    std::vector<Sample> want(30, 0);
    auto h = calibration("H1", "q1");
    want.insert(want.end(), h.begin(), h.end());
    EXPECT_EQ(c.samples, want);
    EXPECT_EQ(s.provenance.size(), 2u);
}

TEST(Emit, UnitGivesEmptySchedule) {
    auto s = emit(test::judgement("", "*", "1"), chip());
    EXPECT_TRUE(s.channels.empty());
    EXPECT_TRUE(validate(s, test::judgement("", "*", "1")).ok());
}

TEST(Emit, BoxedResultEndsLater) {
    auto j = test::judgement("x:^-10 q1", "box[10] H1(x)", "[10] q1");
    auto s = emit(j, chip());
    EXPECT_EQ(s.channels.at("q1").start_ns, -10);
    EXPECT_EQ(s.channels.at("q1").end_ns, 10);
    EXPECT_TRUE(validate(s, j).ok());
}

TEST(Emit, MissingCalibrationIsReported) {
    ChipSpec bare({"q1"}, {GateDecl{"G", {"q1"}, 5}}, {});
    EXPECT_THROW(emit(test::judgement("x:^-5 q1", "G(x)", "q1"), bare), SemanticsError);
}

TEST(Validate, WholeCorpusPasses) {
    auto f = corpus();
    ASSERT_EQ(f.declarations.size(), 20u);
    for (const auto& d : f.declarations) {
        auto s = emit(d.judgement, chip());
        auto r = validate(s, d.judgement);
        EXPECT_TRUE(r.ok()) << d.name << "\n" << to_string(r);
    }
}

TEST(Validate, DeletedSampleLeavesGap) {
    auto j = test::judgement("x:^-50 q1", "H1(delay[q1,30](x))", "q1");
    auto s = emit(j, chip());
    auto& samples = s.channels.at("q1").samples;
    samples.erase(samples.begin() + 10);
    auto r = validate(s, j);
    ASSERT_FALSE(r.ok());
    ASSERT_EQ(r.channels.size(), 1u);
    EXPECT_EQ(r.channels[0].gaps, (std::vector<Interval>{{-1, 0}}));
}

TEST(Validate, DuplicatedSegmentOverlaps) {
    auto j = test::judgement("x:^-20 q1", "H1(x)", "q1");
    auto s = emit(j, chip());
    auto& samples = s.channels.at("q1").samples;
    std::vector<Sample> seg(samples.begin() + 2, samples.begin() + 5);
    samples.insert(samples.begin() + 5, seg.begin(), seg.end());
    auto r = validate(s, j);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.channels[0].overlaps, (std::vector<Interval>{{0, 3}}));
}

TEST(Validate, DuplicatedProvenanceOverlaps) {
    auto j = test::judgement("x:^-50 q1", "H1(delay[q1,30](x))", "q1");
    auto s = emit(j, chip());
    s.provenance.push_back(s.provenance.front());
    auto r = validate(s, j);
    ASSERT_FALSE(r.ok());
    EXPECT_FALSE(r.channels[0].overlaps.empty());
}

TEST(Validate, UntouchedQubit) {
    auto j = test::judgement("x:^-20 q1, y:^0 q2", "(H1(x), y)", "q1 * q2");
    auto s = emit(j, chip());
    EXPECT_EQ(s.channels.at("q2").samples.size(), 0u);
    EXPECT_TRUE(validate(s, j).ok());
    s.channels.erase("q2");
    EXPECT_TRUE(validate(s, j).ok());
    s = emit(j, chip());
    s.channels.at("q2").end_ns = 5;
    s.channels.at("q2").samples = {0, 0, 0, 0, 0};
    EXPECT_FALSE(validate(s, j).ok());
}

TEST(Json, RoundTripIsByteStable) {
    for (const auto& d : corpus().declarations) {
        auto s = emit(d.judgement, chip());
        std::string text = to_json(s);
        Schedule back = schedule_from_json(text);
        EXPECT_EQ(back, s) << d.name;
        EXPECT_EQ(to_json(back), text) << d.name;
    }
}

TEST(Json, KeysAreSorted) {
    auto text = to_json(emit(test::judgement("x:^-20 q1", "H1(x)", "q1"), chip()));
    EXPECT_LT(text.find("\"channels\""), text.find("\"provenance\""));
    EXPECT_LT(text.find("\"end_ns\""), text.find("\"samples\""));
    EXPECT_LT(text.find("\"samples\""), text.find("\"start_ns\""));
    EXPECT_THROW(schedule_from_json("{"), std::runtime_error);
}
