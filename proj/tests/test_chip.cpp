#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pstt/chip.hpp"

using namespace pstt;

namespace {

ChipError::Kind error_kind(std::string_view text) {
    try {
        parse_chip_spec(text);
    } catch (const ChipError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "spec was accepted: " << text;
    return ChipError::Kind::Syntax;
}

}  // namespace

TEST(ChipSpec, TwoQubitsOneGate) {
    auto chip = parse_chip_spec(R"({"qubits": ["q1", "q2"],
        "gates": [{"name": "H1", "qubits": ["q1"], "duration_ns": 20}]})");
    EXPECT_EQ(chip.qubits().size(), 2u);
    EXPECT_EQ(chip.gates().size(), 1u);
    EXPECT_EQ(chip.find_gate("H1")->duration_ns, 20);
}

TEST(ChipSpec, RepeatedQubitRejected) {
    EXPECT_EQ(error_kind(R"({"qubits": ["q1"], "gates": [{"name": "X", "qubits": ["q1", "q1"], "duration_ns": 5}]})"),
              ChipError::Kind::RepeatedQubit);
}

TEST(ChipSpec, EmptyGateListIsValid) {
    auto chip = parse_chip_spec(R"({"qubits": ["q1"], "gates": []})");
    EXPECT_EQ(chip.qubits().size(), 1u);
    EXPECT_TRUE(chip.gates().empty());
}

TEST(ChipSpec, Errors) {
    using K = ChipError::Kind;
    EXPECT_EQ(error_kind(R"({"qubits": ["q1", "q1"]})"), K::DuplicateQubit);
    EXPECT_EQ(error_kind(R"({"qubits": ["q1"], "gates": [{"name": "A", "qubits": ["q1"], "duration_ns": 1},
                                                         {"name": "A", "qubits": ["q1"], "duration_ns": 2}]})"),
              K::DuplicateGate);
    EXPECT_EQ(error_kind(R"({"qubits": ["q1"], "gates": [{"name": "A", "qubits": ["q7"], "duration_ns": 1}]})"),
              K::UndeclaredQubit);
    EXPECT_EQ(error_kind(R"({"qubits": ["q1"], "gates": [{"name": "A", "qubits": ["q1"], "duration_ns": 2}],
                            "calibrations": {"A": {"q1": [1]}}})"),
              K::CalibrationMismatch);
    EXPECT_EQ(error_kind(R"({"qubits": ["q1"], "gates": [{"name": "A", "qubits": [], "duration_ns": 2}]})"),
              K::EmptyGate);
    EXPECT_EQ(error_kind(R"({"qubits": ["q1"], "gates": [{"name": "A", "qubits": ["q1"], "duration_ns": -2}]})"),
              K::InvalidDuration);
}

TEST(ChipSpec, SyntaxErrorHasPosition) {
    try {
        parse_chip_spec("{\n  \"qubits\": [\"q1\",,]\n}");
        FAIL();
    } catch (const ChipError& e) {
        EXPECT_EQ(e.kind(), ChipError::Kind::Syntax);
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.column(), 1);
    }
}

TEST(ChipSpec, ParsingIsDeterministic) {
    const auto& a = test::chip0_from_file();
    auto b = load_chip_spec(PSTT_TEST_DATA "/chip0.json");
    ASSERT_EQ(a.gates().size(), b.gates().size());
    for (std::size_t i = 0; i < a.gates().size(); ++i) {
        EXPECT_EQ(a.gates()[i].name, b.gates()[i].name);
        EXPECT_EQ(a.gates()[i].qubits, b.gates()[i].qubits);
    }
    for (const auto& [name, cal] : a.calibrations()) EXPECT_EQ(cal.samples, b.calibrations().at(name).samples);
}

TEST(DelayGate, ThirtyZeros) {
    auto d = test::chip0_from_file().delay_gate("q1", 30);
    EXPECT_EQ(d.gate.name, "delay[q1,30]");
    EXPECT_EQ(d.gate.duration_ns, 30);
    EXPECT_EQ(d.gate.qubits, std::vector<QubitId>{"q1"});
    EXPECT_EQ(d.calibration.samples.at("q1"), std::vector<Sample>(30, 0));
}

TEST(DelayGate, UnitDuration) {
    auto d = test::chip0_from_file().delay_gate("q1", 1);
    EXPECT_EQ(d.gate.duration_ns, 1);
    EXPECT_EQ(d.calibration.samples.at("q1"), std::vector<Sample>{0});
}

TEST(DelayGate, Errors) {
    const auto& chip = test::chip0_from_file();
    EXPECT_THROW(chip.delay_gate("q9", 5), ChipError);
    EXPECT_THROW(chip.delay_gate("q1", 0), ChipError);
    auto off = parse_chip_spec(R"({"qubits": ["q1"], "delay_gates": false})");
    EXPECT_THROW(off.delay_gate("q1", 5), ChipError);
    EXPECT_FALSE(off.find_gate("delay[q1,5]").has_value());
}

TEST(DelayGate, LookupByName) {
    const auto& chip = test::chip0_from_file();
    auto g = chip.find_gate("delay[q2,7]");
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(g->duration_ns, 7);
    EXPECT_FALSE(chip.find_gate("delay[q2,0]").has_value());
    EXPECT_FALSE(chip.find_gate("delay[q3,4]").has_value());
}
